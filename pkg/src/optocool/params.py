"""Physical parameter records and the derived coupling constants.

Everything is strict SI internally: rad/s for angular frequencies and rates,
kg, m, W, K.  Convenience units (mW, kHz, nm, mK) are converted only at the
scenario-file boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import scipy.constants as _sc

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = _sc.c
    hbar: float = _sc.hbar
    kB: float = _sc.k


CONSTANTS = PhysicalConstants()


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


@dataclass(frozen=True)
class MirrorSpec:
    """Fundamental mechanical mode of the mirror.

    ``nu`` is the angular frequency (rad/s), ``mass`` the effective mass (kg)
    and ``quality`` the mechanical Q.  The zero-point length ``q0`` is always
    recomputed from the other two fields.
    """

    nu: float
    mass: float
    quality: float = math.inf

    def __post_init__(self):
        _require(self.nu > 0, f"mirror frequency must be positive, got {self.nu}")
        _require(self.mass > 0, f"mirror mass must be positive, got {self.mass}")
        _require(self.quality > 0, f"quality factor must be positive, got {self.quality}")

    @property
    def q0(self) -> float:
        return math.sqrt(CONSTANTS.hbar / (2.0 * self.mass * self.nu))

    @property
    def env_rate(self) -> float:
        """Mechanical damping rate nu/Q (zero for an ideal oscillator)."""
        return self.nu / self.quality


@dataclass(frozen=True)
class DriveSpec:
    """One classical CW drive.

    The amplitude is real and non-negative; construct from a power with
    :meth:`from_power`.  ``gamma`` is the atomic decay rate into this drive's
    radiation continuum and ``Gamma`` the spontaneous decay rate into the
    corresponding bath channel.
    """

    omega0: float
    amplitude: float
    gamma: float = 0.0
    Gamma: float = 0.0

    def __post_init__(self):
        _require(self.omega0 > 0, f"drive frequency must be positive, got {self.omega0}")
        _require(self.amplitude >= 0, f"amplitude must be non-negative, got {self.amplitude}")
        _require(self.gamma >= 0, f"gamma must be non-negative, got {self.gamma}")
        _require(self.Gamma >= 0, f"Gamma must be non-negative, got {self.Gamma}")

    @classmethod
    def from_power(cls, omega0: float, power: float, gamma: float = 0.0, Gamma: float = 0.0) -> "DriveSpec":
        return cls(omega0, amplitude_from_power(power, omega0), gamma, Gamma)

    @classmethod
    def from_rabi(cls, omega0: float, rabi: float, gamma: float, Gamma: float = 0.0) -> "DriveSpec":
        """Drive whose amplitude produces the Rabi frequency ``rabi`` through ``gamma``."""
        _require(gamma > 0, "a Rabi-frequency drive needs gamma > 0")
        _require(rabi >= 0, f"Rabi frequency must be non-negative, got {rabi}")
        return cls(omega0, rabi / math.sqrt(2.0 * CONSTANTS.c * gamma / math.pi), gamma, Gamma)

    @property
    def power(self) -> float:
        return power_from_amplitude(self.amplitude, self.omega0)

    @property
    def wavenumber(self) -> float:
        return self.omega0 / CONSTANTS.c

    @property
    def loss(self) -> float:
        """Total decay rate gamma + Gamma out of the excited state through this arm."""
        return self.gamma + self.Gamma


@dataclass(frozen=True)
class AtomCloudSpec:
    n_atoms: int
    xbar: float
    delta: float

    def __post_init__(self):
        _require(int(self.n_atoms) == self.n_atoms and self.n_atoms >= 0,
                 f"n_atoms must be a non-negative integer, got {self.n_atoms}")
        _require(self.xbar >= 0, f"xbar must be non-negative, got {self.xbar}")

    @property
    def tau(self) -> float:
        return 2.0 * self.xbar / CONSTANTS.c


@dataclass(frozen=True)
class EnvironmentSpec:
    temperature: float
    mirror: MirrorSpec = field(repr=False)

    def __post_init__(self):
        _require(self.temperature >= 0, f"temperature must be non-negative, got {self.temperature}")

    @property
    def n_thermal(self) -> float:
        return thermal_occupation(self.temperature, self.mirror)


def amplitude_from_power(power: float, omega0: float) -> float:
    _require(omega0 > 0, f"drive frequency must be positive, got {omega0}")
    _require(power >= 0, f"power must be non-negative, got {power}")
    return math.sqrt(2.0 * math.pi * power / (CONSTANTS.c * CONSTANTS.hbar * omega0))


def power_from_amplitude(amplitude: float, omega0: float) -> float:
    _require(omega0 > 0, f"drive frequency must be positive, got {omega0}")
    return amplitude**2 * CONSTANTS.c * CONSTANTS.hbar * omega0 / (2.0 * math.pi)


def optomech_coupling(drive: DriveSpec, mirror: MirrorSpec) -> float:
    """Mirror-radiation coupling 2 sqrt(c/2pi) k0 q0 amplitude, in rad/s."""
    return 2.0 * math.sqrt(CONSTANTS.c / (2.0 * math.pi)) * drive.wavenumber * mirror.q0 * drive.amplitude


def rabi_frequency(drive: DriveSpec) -> float:
    # position phases are applied by the caller, not here
    return math.sqrt(2.0 * CONSTANTS.c * drive.gamma / math.pi) * drive.amplitude


def thermal_occupation(temperature: float, mirror: MirrorSpec) -> float:
    _require(temperature >= 0, f"temperature must be non-negative, got {temperature}")
    return CONSTANTS.kB * temperature / (CONSTANTS.hbar * mirror.nu)
