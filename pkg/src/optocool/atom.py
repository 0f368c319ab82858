"""Single Lambda-atom dynamics: Bloch matrix, dark steady state, resolvent
responses and the closed-form spectral factor J(omega).

The 8-component moment vector is ordered

    (s_dd - s_gg, s_ge, s_eg, s_dd - s_ee, s_gd, s_dg, s_ed, s_de)

with s_ll' = |l><l'| and the trace s_gg + s_ee + s_dd = 1 eliminated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DegenerateDarkStateError, DomainError, PoleError, SingularSystemError
from .params import CONSTANTS

BASIS = ("dd-gg", "ge", "eg", "dd-ee", "gd", "dg", "ed", "de")
IDX_GD, IDX_ED = 4, 6
COND_LIMIT = 1e12

# |omega| below this fraction of the atomic frequency scale returns J = 0 exactly
OMEGA_ZERO_FRACTION = 1e-15


@dataclass(frozen=True)
class BlochSystem:
    M: np.ndarray
    v: np.ndarray
    Omega_p: complex
    Omega_c: complex

    def __post_init__(self):
        self.M.setflags(write=False)
        self.v.setflags(write=False)


@dataclass(frozen=True)
class SteadyState:
    sigma: np.ndarray
    residual: float
    condition: float

    @property
    def populations(self):
        """(p_g, p_e, p_d) recovered with the unit-trace constraint."""
        s1, s4 = self.sigma[0].real, self.sigma[3].real
        p_d = (1.0 + s1 + s4) / 3.0
        return p_d - s1, p_d - s4, p_d

    @property
    def optical_coherences(self):
        return self.sigma[4:8]


class TransformationMatrices(NamedTuple):
    """Commutator actions [s_gd, .], [s_dg, .], [s_ed, .], [s_de, .] on the basis."""

    pd: np.ndarray
    p: np.ndarray
    cd: np.ndarray
    c: np.ndarray


def _sparse8(entries):
    m = np.zeros((8, 8))
    for (r, col), val in entries.items():
        m[r, col] = val
    m.setflags(write=False)
    return m


TRANSFORMS = TransformationMatrices(
    pd=_sparse8({(0, 4): 2, (2, 6): -1, (3, 4): 1, (5, 0): -1, (7, 1): 1}),
    p=_sparse8({(0, 5): -2, (1, 7): 1, (3, 5): -1, (4, 0): 1, (6, 2): -1}),
    cd=_sparse8({(0, 6): 1, (1, 4): -1, (3, 6): 2, (5, 2): 1, (7, 3): -1}),
    c=_sparse8({(0, 7): -1, (2, 5): 1, (3, 7): -2, (4, 1): -1, (6, 3): 1}),
)


def transformation_matrices() -> TransformationMatrices:
    return TRANSFORMS


def decay_constants(gamma_p, gamma_c, Gamma_p, Gamma_c):
    """(Gamma_1, Gamma_4, Gamma_tilde) of the population and coherence equations."""
    rp = gamma_p + Gamma_p
    rc = gamma_c + Gamma_c
    return (2 * rp + rc) / 3.0, (rp + 2 * rc) / 3.0, rp + rc


def build_bloch(Omega_p, Omega_c, delta_g, delta_e, gamma_p, gamma_c, Gamma_p, Gamma_c) -> BlochSystem:
    """Assemble M and v such that d<sigma>/dt = M <sigma> + v.

    ``Omega_p`` and ``Omega_c`` may carry per-atom position phases.
    """
    rates = (gamma_p, gamma_c, Gamma_p, Gamma_c)
    if min(rates) < 0:
        raise DomainError(f"decay rates must be non-negative, got {rates}")
    if max(rates) == 0 and Omega_p == 0 and Omega_c == 0:
        raise SingularSystemError("no drive and no decay: the atomic steady state is not unique",
                                  condition=math.inf)
    G1, G4, Gt = decay_constants(*rates)
    op, oc = complex(Omega_p), complex(Omega_c)
    opc, occ = op.conjugate(), oc.conjugate()
    split = 1j * (delta_g - delta_e)

    M = np.zeros((8, 8), dtype=np.complex128)
    M[0] = [-G1, 0, 0, -G1, -opc, -op, -occ / 2, -oc / 2]
    M[1] = [0, -split, 0, 0, occ / 2, 0, 0, op / 2]
    M[2] = [0, 0, split, 0, 0, oc / 2, opc / 2, 0]
    M[3] = [-G4, 0, 0, -G4, -opc / 2, -op / 2, -occ, -oc]
    # optical coherences s_gd and s_ed both rotate as exp(-i Delta t) under H_a
    M[4] = [op / 2, -oc / 2, 0, 0, -1j * delta_g - Gt / 2, 0, 0, 0]
    M[5] = [opc / 2, 0, -occ / 2, 0, 0, 1j * delta_g - Gt / 2, 0, 0]
    M[6] = [0, 0, -op / 2, oc / 2, 0, 0, -1j * delta_e - Gt / 2, 0]
    M[7] = [0, -opc / 2, 0, occ / 2, 0, 0, 0, 1j * delta_e - Gt / 2]

    v = np.zeros(8, dtype=np.complex128)
    v[0] = -G1
    v[3] = -G4
    return BlochSystem(M, v, op, oc)


def bare_steady_state(system: BlochSystem) -> SteadyState:
    cond = np.linalg.cond(system.M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(f"Bloch matrix is singular (condition number {cond:.3g})", condition=cond)
    sigma = np.linalg.solve(system.M, -system.v)
    res = np.linalg.norm(system.M @ sigma + system.v) / max(np.linalg.norm(system.v), 1e-300)
    sigma.setflags(write=False)
    return SteadyState(sigma, float(res), float(cond))


def dark_state_amplitudes(Omega_p, Omega_c):
    norm = math.sqrt(abs(Omega_p) ** 2 + abs(Omega_c) ** 2)
    if norm == 0:
        raise DegenerateDarkStateError("both Rabi frequencies vanish; the dark state is undefined")
    return complex(Omega_c) / norm, -complex(Omega_p) / norm


def dark_state_vector(Omega_p, Omega_c) -> np.ndarray:
    """Expectation values of the 8 basis operators in the pure dark state."""
    cg, ce = dark_state_amplitudes(Omega_p, Omega_c)
    pg, pe = abs(cg) ** 2, abs(ce) ** 2
    coh = cg.conjugate() * ce  # <s_ge>
    return np.array([-pg, coh, coh.conjugate(), -pe, 0, 0, 0, 0], dtype=np.complex128)


def resolvent_response(system: BlochSystem, steady: SteadyState, omega: float,
                       channel: str, projector: str) -> complex:
    """2 pi u . (-(i omega + M)^-1) M_channel sigma_ss, projected on s_gd or s_ed."""
    try:
        transform = getattr(TRANSFORMS, channel)
    except AttributeError:
        raise DomainError(f"unknown channel {channel!r}; expected one of {TRANSFORMS._fields}") from None
    if projector not in ("gd", "ed"):
        raise DomainError(f"unknown projector {projector!r}; expected 'gd' or 'ed'")
    row = IDX_GD if projector == "gd" else IDX_ED
    A = 1j * omega * np.eye(8) + system.M
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        eig = np.linalg.eigvals(system.M)
        worst = eig[np.argmin(np.abs(eig + 1j * omega))]
        raise SingularSystemError(f"i*omega + M is singular at omega={omega:g} (eigenvalue {worst:.6g})",
                                  condition=cond, eigenvalue=complex(worst))
    x = np.linalg.solve(A, transform @ steady.sigma)
    return complex(-2.0 * math.pi * x[row])


def _frequency_scale(rabi_sq, gamma_tilde):
    return max(math.sqrt(rabi_sq), gamma_tilde)


@dataclass(frozen=True)
class SpectralFactor:
    value: complex
    omega: float


def spectral_factor_array(omega, Omega_p, Omega_c, delta, gamma_p, gamma_c, Gamma_p, Gamma_c) -> np.ndarray:
    """Vectorised closed-form J(omega) for real ``omega`` values."""
    rabi_sq = abs(Omega_p) ** 2 + abs(Omega_c) ** 2
    if rabi_sq <= 0:
        raise DegenerateDarkStateError("spectral factor needs |Omega_p|^2 + |Omega_c|^2 > 0")
    gamma_tilde = gamma_p + Gamma_p + gamma_c + Gamma_c
    prefactor = gamma_p * gamma_c * CONSTANTS.c / (2.0 * math.pi)
    zero_tol = OMEGA_ZERO_FRACTION * _frequency_scale(rabi_sq, gamma_tilde)
    omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    out = _kernels.spectral_factor(omega, rabi_sq, delta, gamma_tilde, prefactor, zero_tol)
    if np.isnan(out).any():
        bad = omega[np.isnan(out)][0]
        raise PoleError(f"spectral factor has a pole at omega={bad:g} (lossless resonance)")
    return out


def spectral_factor(omega, Omega_p, Omega_c, delta, gamma_p, gamma_c, Gamma_p, Gamma_c) -> SpectralFactor:
    val = spectral_factor_array([omega], Omega_p, Omega_c, delta, gamma_p, gamma_c, Gamma_p, Gamma_c)[0]
    return SpectralFactor(complex(val), float(omega))


def closed_form_response(channel, projector, J, alpha_p, alpha_c, gamma_p, gamma_c,
                         phase_p=0.0, phase_c=0.0):
    """Resolvent responses expressed through J for an atom with position phases.

    ``phase_p`` and ``phase_c`` are omega_p0 x/c and omega_c0 x/c; the Rabi
    frequencies of that atom are exp(-i phase_p) Omega_p and exp(+i phase_c) Omega_c.
    """
    if channel in ("pd", "cd"):
        return 0j
    twopi = 2.0 * math.pi
    ap, ac = complex(alpha_p), complex(alpha_c)
    total = phase_p + phase_c
    if projector == "gd" and channel == "p":
        return abs(ac) ** 2 * twopi / gamma_p * J
    if projector == "gd" and channel == "c":
        return -np.exp(-1j * total) * ap * ac.conjugate() * twopi / math.sqrt(gamma_p * gamma_c) * J
    if projector == "ed" and channel == "p":
        return -np.exp(1j * total) * ap.conjugate() * ac * twopi / math.sqrt(gamma_p * gamma_c) * J
    if projector == "ed" and channel == "c":
        return abs(ap) ** 2 * twopi / gamma_c * J
    raise DomainError(f"unknown channel/projector pair {channel!r}/{projector!r}")
