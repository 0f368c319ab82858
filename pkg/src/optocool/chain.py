"""Mirror-sideband correlations transported through the atom chain.

For each branch the zero-frequency correlations P_i = <x A_p^(i)>_0 and
C_i = <x A_c^(i)>_0 (x = b for the red branch, b^dag for the blue one)
obey, for i = 1..N,

    P_i     = (1 + a_c) P_{i+1} - a_pc C_i - s_p
    C_{i+1} = -a_cp P_{i+1} + (1 + a_p) C_i + s_c

with P_{N+1} = 0 and C_1 = 0.  The data sit at opposite ends, so the exact
solution is a two-point boundary-value problem.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import expm

from . import _kernels
from .errors import DomainError, PoleError, SingularSystemError

RED, BLUE = "red", "blue"
POLE_TOL = 1e-9


@dataclass(frozen=True)
class ChainInputs:
    """Inputs for one parameter set.

    ``phase`` is the round-trip placement phase exp(i nu tau).  It is kept
    explicitly because nu*tau is huge for any realistic cloud distance; use
    :func:`placement_phase` to build it from tau when that is meaningful.
    Unequal drive amplitudes are supported through ``alpha_ratio`` =
    alpha_p/alpha_c with alpha_p*alpha_c = alpha_sq.
    """

    n_atoms: int
    alpha_sq: float
    J_plus: complex
    J_minus: complex
    mu_c: complex
    phase: complex = 1.0
    n_occ: float = 0.0
    alpha_ratio: float = 1.0

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise DomainError(f"n_atoms must be a positive integer, got {self.n_atoms}")
        if self.alpha_sq < 0:
            raise DomainError(f"alpha_sq must be non-negative, got {self.alpha_sq}")
        if self.n_occ < 0:
            raise DomainError(f"n_occ must be non-negative, got {self.n_occ}")
        if self.alpha_ratio <= 0:
            raise DomainError(f"alpha_ratio must be positive, got {self.alpha_ratio}")
        if not math.isclose(abs(self.phase), 1.0, rel_tol=1e-9):
            raise DomainError(f"placement phase must have unit modulus, got {self.phase}")

    @property
    def eta_plus(self) -> complex:
        return self.n_atoms * self.alpha_sq * self.J_plus

    @property
    def eta_minus(self) -> complex:
        return self.n_atoms * self.alpha_sq * self.J_minus

    def branch_data(self, branch):
        """(J, propagation phase, occupation source) of one branch."""
        if branch == RED:
            return self.J_minus, complex(self.phase).conjugate(), self.n_occ + 1.0
        if branch == BLUE:
            return self.J_plus, complex(self.phase), self.n_occ
        raise DomainError(f"branch must be 'red' or 'blue', got {branch!r}")


def placement_phase(tau: float, nu: float) -> complex:
    return cmath.exp(1j * nu * tau)


class StepCoefficients(NamedTuple):
    """Per-atom map (P_{i+1}, C_i) -> (P_i, C_{i+1}) plus its source."""

    matrix: np.ndarray
    source: np.ndarray

    @property
    def a_c(self):
        return self.matrix[0, 0] - 1.0

    @property
    def a_pc(self):
        return -self.matrix[0, 1]

    @property
    def a_cp(self):
        return -self.matrix[1, 0]

    @property
    def a_p(self):
        return self.matrix[1, 1] - 1.0


def recurrence_coefficients(inputs: ChainInputs, branch: str) -> StepCoefficients:
    J, ph, occ = inputs.branch_data(branch)
    root = math.sqrt(inputs.alpha_sq)
    alpha_p = root * math.sqrt(inputs.alpha_ratio)
    alpha_c = root / math.sqrt(inputs.alpha_ratio)
    a_c = alpha_c**2 * J
    a_p = alpha_p**2 * J
    a_pc = alpha_p * alpha_c * J  # amplitudes are real, so conjugation is trivial
    a_cp = a_pc
    kick = 1j * ph * inputs.mu_c / 2.0 * occ
    matrix = np.array([[1.0 + a_c, -a_pc], [-a_cp, 1.0 + a_p]], dtype=np.complex128)
    source = np.array([-kick * a_pc, kick * a_p], dtype=np.complex128)
    return StepCoefficients(matrix, source)


@dataclass(frozen=True)
class ChainSolution:
    """Correlations at i = 1..N+1 (array index i-1); unsolved branches are None."""

    bAp: Optional[np.ndarray] = None
    bAc: Optional[np.ndarray] = None
    bdAp: Optional[np.ndarray] = None
    bdAc: Optional[np.ndarray] = None
    residual: float = 0.0

    def branch(self, branch):
        return (self.bAp, self.bAc) if branch == RED else (self.bdAp, self.bdAc)

    def merge(self, other: "ChainSolution") -> "ChainSolution":
        pick = lambda a, b: a if a is not None else b
        return ChainSolution(pick(self.bAp, other.bAp), pick(self.bAc, other.bAc),
                             pick(self.bdAp, other.bdAp), pick(self.bdAc, other.bdAc),
                             max(self.residual, other.residual))


def _pack(branch, probe, ctrl, residual):
    if branch == RED:
        return ChainSolution(bAp=probe, bAc=ctrl, residual=residual)
    return ChainSolution(bdAp=probe, bdAc=ctrl, residual=residual)


def recurrence_residual(coef: StepCoefficients, probe, ctrl) -> float:
    """Largest violation of the recurrence and boundary conditions, relative to the data scale."""
    m, s = coef.matrix, coef.source
    r1 = probe[:-1] - (m[0, 0] * probe[1:] + m[0, 1] * ctrl[:-1] + s[0])
    r2 = ctrl[1:] - (m[1, 0] * probe[1:] + m[1, 1] * ctrl[:-1] + s[1])
    scale = max(np.abs(probe).max(), np.abs(ctrl).max(), np.abs(s).max(), 1e-300)
    worst = max(np.abs(r1).max(), np.abs(r2).max(), abs(probe[-1]), abs(ctrl[0]))
    return float(worst / scale)


def _tridiagonal_system(n, coef: StepCoefficients):
    """Bands and right-hand side for unknowns ordered (P_1, C_1, ..., P_{N+1}, C_{N+1})."""
    size = 2 * (n + 1)
    m, s = coef.matrix, coef.source
    dl = np.zeros(size - 1, dtype=np.complex128)
    d = np.zeros(size, dtype=np.complex128)
    du = np.zeros(size - 1, dtype=np.complex128)
    rhs = np.zeros(size, dtype=np.complex128)
    du[0] = 1.0  # row 0: C_1 = 0
    rows_p = np.arange(1, 2 * n, 2)  # P_i - m00 P_{i+1} - m01 C_i = s_p
    dl[rows_p - 1] = 1.0
    d[rows_p] = -m[0, 1]
    du[rows_p] = -m[0, 0]
    rhs[rows_p] = s[0]
    rows_c = np.arange(2, 2 * n + 1, 2)  # C_{i+1} - m10 P_{i+1} - m11 C_i = s_c
    dl[rows_c - 1] = -m[1, 1]
    d[rows_c] = -m[1, 0]
    du[rows_c] = 1.0
    rhs[rows_c] = s[1]
    dl[size - 2] = 1.0  # last row: P_{N+1} = 0
    return dl, d, du, rhs


def solve_chain_exact(inputs: ChainInputs, branch: str) -> ChainSolution:
    coef = recurrence_coefficients(inputs, branch)
    n = int(inputs.n_atoms)
    x, info = _kernels.tridiag_solve(*_tridiagonal_system(n, coef))
    if info >= 0 or not np.all(np.isfinite(x)):
        raise SingularSystemError(f"chain system is singular (zero pivot at row {info}, "
                                  f"eta={inputs.n_atoms * inputs.alpha_sq * inputs.branch_data(branch)[0]:.6g})")
    probe, ctrl = x[0::2].copy(), x[1::2].copy()
    # boundary rows are trivial; pin them against rounding in the banded solve
    probe[-1] = 0.0
    ctrl[0] = 0.0
    residual = recurrence_residual(coef, probe, ctrl)
    if residual > 1e-9:
        raise SingularSystemError(f"chain solve is inaccurate (relative residual {residual:.3g})")
    probe.setflags(write=False)
    ctrl.setflags(write=False)
    return _pack(branch, probe, ctrl, residual)


def solve_chain_transfer(inputs: ChainInputs, branch: str) -> ChainSolution:
    """Independent route: forward transfer iteration from the mirror side, shooting on P_1.

    The chain is affine in the unknown P_1, so two sweeps fix it.  Accurate
    only while the transfer map stays well conditioned (moderate N*|a|).
    """
    coef = recurrence_coefficients(inputs, branch)
    n = int(inputs.n_atoms)
    args = (n, coef.a_p, coef.a_c, coef.a_pc, coef.a_cp, -coef.source[0], coef.source[1])
    p0, c0 = _kernels.transfer_sweep(*args, 0.0)
    p1, _ = _kernels.transfer_sweep(*args, 1.0)
    slope = p1[-1] - p0[-1]
    if slope == 0:
        raise SingularSystemError("transfer map does not reach the far boundary")
    start = -p0[-1] / slope
    probe, ctrl = _kernels.transfer_sweep(*args, start)
    return _pack(branch, probe, ctrl, recurrence_residual(coef, probe, ctrl))


def saturation_ratio(eta: complex) -> complex:
    """eta / (1 - eta), with the |eta| -> infinity limit -1."""
    if not cmath.isfinite(eta):
        return -1.0 + 0j
    if abs(1.0 - eta) < POLE_TOL:
        raise PoleError(f"collective coupling eta={eta} is at the saturation pole eta=1")
    return eta / (1.0 - eta)


def solve_chain_closed_form(inputs: ChainInputs, branch: str) -> complex:
    """Leading-order boundary correlation <x A_p^(1)>_0 for equal drive amplitudes."""
    J, ph, occ = inputs.branch_data(branch)
    eta = inputs.n_atoms * inputs.alpha_sq * J
    return -1j * ph * inputs.mu_c / 2.0 * saturation_ratio(eta) * occ


def solve_chain_continuum(inputs: ChainInputs, branch: str) -> complex:
    """Boundary correlation <x A_p^(1)>_0 of the chain in the continuum limit.

    The recurrence becomes y' = K y + s along the cloud, with det K = 0.  The
    affine flow over the whole cloud is a 3x3 matrix exponential, and P(N) = 0
    fixes P(0).  For equal amplitudes K is nilpotent and this reproduces
    :func:`solve_chain_closed_form`; unequal amplitudes add exp(N J (a_p^2 - a_c^2)).
    """
    coef = recurrence_coefficients(inputs, branch)
    n = float(inputs.n_atoms)
    gen = np.zeros((3, 3), dtype=np.complex128)
    gen[0, 0], gen[0, 1], gen[0, 2] = -coef.a_c, coef.a_pc, -coef.source[0]
    gen[1, 0], gen[1, 1], gen[1, 2] = -coef.a_cp, coef.a_p, coef.source[1]
    # a common shift only rescales the flow; it keeps the growing mode finite
    shift = max(0.0, (np.trace(gen) * n).real)
    flow = expm(gen * n - shift * np.eye(3))
    if flow[0, 0] == 0:
        raise PoleError(f"continuum chain is at its saturation pole (eta={inputs.n_atoms * inputs.alpha_sq * inputs.branch_data(branch)[0]})")
    return complex(-flow[0, 2] / flow[0, 0])


METHODS = ("exact", "continuum", "closed")


def boundary_response(inputs: ChainInputs, branch: str, method: str = "exact") -> complex:
    """<x A_p^(1)>_0 per unit occupation source (n+1 for red, n for blue).

    ``method`` is ``"exact"`` (discrete chain), ``"continuum"`` or ``"closed"``
    (leading order, equal amplitudes only).
    """
    unit = ChainInputs(inputs.n_atoms, inputs.alpha_sq, inputs.J_plus, inputs.J_minus, inputs.mu_c,
                       inputs.phase, n_occ=1.0 if branch == BLUE else 0.0, alpha_ratio=inputs.alpha_ratio)
    if method == "exact":
        return complex(solve_chain_exact(unit, branch).branch(branch)[0][0])
    if method == "continuum":
        return solve_chain_continuum(unit, branch)
    if method == "closed":
        return solve_chain_closed_form(unit, branch)
    raise DomainError(f"unknown chain method {method!r}; expected one of {METHODS}")
