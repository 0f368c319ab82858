"""Phonon-occupation rate equation, its steady state and strategy design.

The occupation obeys

    dn/dt = N0 + L+ n + L- (n + 1) + r (N_th - n)

with r = nu/Q the mechanical damping rate.  Being scalar and linear, it is
integrated exactly; a numerical integrator is kept as a cross-check.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .chain import BLUE, RED, ChainInputs, boundary_response, saturation_ratio
from .errors import DomainError
from .params import CONSTANTS

FEASIBLE_DISTANCE_M = 1000.0
FEW_ATOM_WARN = 0.1


class Strategy(str, enum.Enum):
    BS_ENHANCE = "bs"
    TMS_SUPPRESS = "tms"

    @classmethod
    def parse(cls, value) -> "Strategy":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"bs": cls.BS_ENHANCE, "bs_enhance": cls.BS_ENHANCE,
                   "tms": cls.TMS_SUPPRESS, "tms_suppress": cls.TMS_SUPPRESS}
        if key not in aliases:
            raise DomainError(f"unknown strategy {value!r}; expected 'bs' or 'tms'")
        return aliases[key]


@dataclass(frozen=True)
class StrategyChoice:
    kind: Strategy
    placement_index: int = 0

    def __post_init__(self):
        if int(self.placement_index) != self.placement_index or self.placement_index < 0:
            raise DomainError(f"placement index must be a non-negative integer, got {self.placement_index}")

    @property
    def phase(self) -> int:
        return 1 if self.kind is Strategy.BS_ENHANCE else -1


@dataclass(frozen=True)
class CoolingRates:
    N0: float
    LambdaPlus: float
    LambdaMinus: float
    env_rate: float = 0.0
    n_thermal: float = 0.0

    @property
    def net_rate(self) -> float:
        """Atom-induced linear coefficient L+ + L-."""
        return self.LambdaPlus + self.LambdaMinus

    @property
    def cooling(self) -> bool:
        return self.net_rate < 0

    def drift(self, include_env: bool = True) -> float:
        """Total linear coefficient of n in dn/dt."""
        return self.net_rate - (self.env_rate if include_env else 0.0)

    def source(self, include_env: bool = True) -> float:
        return self.N0 + self.LambdaMinus + (self.env_rate * self.n_thermal if include_env else 0.0)


def assemble_rates(mu_p, mu_c, eta_plus, eta_minus, phase=1.0, *, env_rate=0.0, n_thermal=0.0) -> CoolingRates:
    """N0 and L+- from the collective couplings eta_+- = N |alpha|^2 J(+-nu).

    An infinite eta stands for the saturated many-atom limit.
    """
    phase = complex(phase)
    cross = complex(mu_p).conjugate() * complex(mu_c)
    n0 = (abs(mu_p) ** 2 + abs(mu_c) ** 2) / 2.0
    lam_plus = (phase * cross * saturation_ratio(complex(eta_plus))).real
    lam_minus = -(phase.conjugate() * cross * saturation_ratio(complex(eta_minus))).real
    return CoolingRates(n0, lam_plus, lam_minus, env_rate, n_thermal)


def rates_from_chain(mu_p, inputs: ChainInputs, *, method="exact", env_rate=0.0, n_thermal=0.0) -> CoolingRates:
    """Rates built from the boundary correlations of the chain solution.

    ``method`` selects the discrete boundary-value solve (``"exact"``), its
    continuum limit (``"continuum"``) or the leading-order closed form
    (``"closed"``).  The first two also cover unequal drive amplitudes.
    """
    mu_p = complex(mu_p)
    red = boundary_response(inputs, RED, method)
    blue = boundary_response(inputs, BLUE, method)
    lam_minus = 2.0 * (-1j * mu_p.conjugate() * red).real
    lam_plus = -2.0 * (-1j * mu_p.conjugate() * blue).real
    n0 = (abs(mu_p) ** 2 + abs(inputs.mu_c) ** 2) / 2.0
    return CoolingRates(n0, lam_plus, lam_minus, env_rate, n_thermal)


def steady_state_occupation(rates: CoolingRates, include_env: bool = True) -> float:
    """Steady occupation, or ``math.inf`` when the total drift is non-negative."""
    drift = rates.drift(include_env)
    if not drift < 0:
        return math.inf
    return rates.source(include_env) / -drift


def evolve_occupation(n0, rates: CoolingRates, t_grid, include_env: bool = True) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or np.any(np.diff(t) < 0):
        raise DomainError("time grid must be a one-dimensional ascending array")
    lam = rates.drift(include_env)
    src = rates.source(include_env)
    if lam >= 0:
        warnings.warn(f"occupation grows without bound (drift {lam:.4g} >= 0)", RuntimeWarning, stacklevel=2)
    if lam == 0:
        return n0 + src * t
    n_fix = src / -lam
    return n_fix + (n0 - n_fix) * np.exp(lam * t)


def evolve_occupation_numeric(n0, rates: CoolingRates, t_grid, include_env=True, rtol=1e-11, atol=1e-12):
    """Adaptive Runge-Kutta integration of the same equation (cross-check path)."""
    lam = rates.drift(include_env)
    src = rates.source(include_env)
    t = np.asarray(t_grid, dtype=float)
    if t.size == 1:
        return np.array([float(n0)])
    sol = solve_ivp(lambda _t, n: src + lam * n, (t[0], t[-1]), [float(n0)], method="DOP853",
                    t_eval=t, rtol=rtol, atol=atol)
    if not sol.success:
        raise DomainError(f"integration failed: {sol.message}")
    return sol.y[0]


def design_detuning(strategy, Omega_p, Omega_c, nu) -> float:
    """Detuning that zeroes the real part of the J denominator at +nu (BS) or -nu (TMS)."""
    if nu <= 0:
        raise DomainError(f"mechanical frequency must be positive, got {nu}")
    rabi_sq = abs(Omega_p) ** 2 + abs(Omega_c) ** 2
    blue = (4.0 * nu**2 - rabi_sq) / (4.0 * nu)
    return blue if Strategy.parse(strategy) is Strategy.BS_ENHANCE else -blue


@dataclass(frozen=True)
class Placement:
    xbar: float
    tau: float
    phase: int
    feasible: bool


def design_position(strategy, nu, placement_index=0) -> Placement:
    choice = StrategyChoice(Strategy.parse(strategy), placement_index)
    half_turns = 2 * choice.placement_index + (0 if choice.kind is Strategy.BS_ENHANCE else 1)
    xbar = half_turns * math.pi * CONSTANTS.c / (2.0 * nu)
    feasible = xbar <= FEASIBLE_DISTANCE_M
    if not feasible:
        warnings.warn(f"cloud distance {xbar:.4g} m is beyond a practical free-space path "
                      f"({FEASIBLE_DISTANCE_M:g} m); a delay line would be required", UserWarning, stacklevel=2)
    return Placement(xbar, 2.0 * xbar / CONSTANTS.c, choice.phase, feasible)


def few_atom_rate(mu_p, mu_c, n_atoms, alpha_sq, J_plus, J_minus, phase=1.0) -> float:
    """Linearised net rate L+ + L- for weak collective coupling."""
    eta_max = n_atoms * alpha_sq * max(abs(J_plus), abs(J_minus))
    if eta_max > FEW_ATOM_WARN:
        warnings.warn(f"few-atom approximation used with N|alpha|^2|J| = {eta_max:.3g}", RuntimeWarning,
                      stacklevel=2)
    phase = complex(phase)
    cross = complex(mu_p).conjugate() * complex(mu_c)
    scale = n_atoms * alpha_sq
    return scale * ((phase * cross * J_plus).real - (phase.conjugate() * cross * J_minus).real)
