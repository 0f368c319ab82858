"""Hot numeric kernels with a numba path and a pure numpy/scipy fallback.

Set ``OPTOCOOL_NUMBA=0`` in the environment to force the fallback.  Both
implementations stay importable (``NUMBA`` and ``NUMPY`` namespaces) so tests
and the benchmark can compare them directly.
"""

import os
from types import SimpleNamespace

import numpy as np
from scipy.linalg import solve_banded

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None


def _env_flag(name, default="1"):
    return os.environ.get(name, default).strip().lower() not in ("0", "false", "no", "off", "")


HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and _env_flag("OPTOCOOL_NUMBA")


# -- spectral factor -------------------------------------------------------

def _spectral_factor_loop(omega, rabi_sq, delta, gamma_tilde, prefactor, zero_tol):
    out = np.empty(omega.shape[0], dtype=np.complex128)
    for k in range(omega.shape[0]):
        w = omega[k]
        if abs(w) <= zero_tol:
            out[k] = 0.0
            continue
        den = rabi_sq * complex(4.0 * delta * w - 4.0 * w * w + rabi_sq, -2.0 * w * gamma_tilde)
        if den == 0:
            out[k] = complex(np.nan, np.nan)
        else:
            out[k] = prefactor * 1j * 16.0 * w / den
    return out


def _spectral_factor_numpy(omega, rabi_sq, delta, gamma_tilde, prefactor, zero_tol):
    omega = np.asarray(omega, dtype=np.float64)
    den = rabi_sq * (-2j * omega * gamma_tilde + 4.0 * delta * omega - 4.0 * omega**2 + rabi_sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = prefactor * 16j * omega / den
    out[den == 0] = complex(np.nan, np.nan)
    out[np.abs(omega) <= zero_tol] = 0.0
    return out


# -- tridiagonal solve with partial pivoting (LAPACK gtsv scheme) ----------

def _gtsv(dl, d, du, b):
    n = d.shape[0]
    dl = dl.copy()
    d = d.copy()
    du = du.copy()
    x = b.copy()
    for k in range(n - 1):
        if abs(d[k]) >= abs(dl[k]):
            if d[k] == 0:
                return x, k
            mult = dl[k] / d[k]
            d[k + 1] -= mult * du[k]
            x[k + 1] -= mult * x[k]
            if k < n - 2:
                dl[k] = 0.0
        else:
            mult = d[k] / dl[k]
            d[k] = dl[k]
            temp = d[k + 1]
            d[k + 1] = du[k] - mult * temp
            if k < n - 2:
                dl[k] = du[k + 1]
                du[k + 1] = -mult * dl[k]
            du[k] = temp
            temp = x[k]
            x[k] = x[k + 1]
            x[k + 1] = temp - mult * x[k + 1]
    if d[n - 1] == 0:
        return x, n - 1
    x[n - 1] /= d[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2]
    for k in range(n - 3, -1, -1):
        x[k] = (x[k] - du[k] * x[k + 1] - dl[k] * x[k + 2]) / d[k]
    return x, -1


def _gtsv_numpy(dl, d, du, b):
    n = d.shape[0]
    ab = np.zeros((3, n), dtype=np.complex128)
    ab[0, 1:] = du
    ab[1, :] = d
    ab[2, :-1] = dl
    try:
        x = solve_banded((1, 1), ab, b, check_finite=False)
    except np.linalg.LinAlgError:
        return np.full(n, np.nan + 0j), 0
    return x, -1


# -- forward transfer iteration along the chain ----------------------------

def _transfer_sweep(n_steps, a_p, a_c, a_pc, a_cp, s_p, s_c, p_first):
    # (P_i, C_i) -> (P_{i+1}, C_{i+1}) starting from C_1 = 0
    probe = np.empty(n_steps + 1, dtype=np.complex128)
    ctrl = np.empty(n_steps + 1, dtype=np.complex128)
    probe[0] = p_first
    ctrl[0] = 0.0
    for i in range(n_steps):
        p_next = (probe[i] + a_pc * ctrl[i] + s_p) / (1.0 + a_c)
        probe[i + 1] = p_next
        ctrl[i + 1] = -a_cp * p_next + (1.0 + a_p) * ctrl[i] + s_c
    return probe, ctrl


NUMPY = SimpleNamespace(
    name="numpy",
    spectral_factor=_spectral_factor_numpy,
    tridiag_solve=_gtsv_numpy,
    transfer_sweep=_transfer_sweep,
)

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    NUMBA = SimpleNamespace(
        name="numba",
        spectral_factor=_jit(_spectral_factor_loop),
        tridiag_solve=_jit(_gtsv),
        transfer_sweep=_jit(_transfer_sweep),
    )
else:  # pragma: no cover
    NUMBA = None

ACTIVE = NUMBA if USE_NUMBA else NUMPY


def backend():
    return ACTIVE.name


def spectral_factor(omega, rabi_sq, delta, gamma_tilde, prefactor, zero_tol=0.0):
    omega = np.ascontiguousarray(omega, dtype=np.float64)
    return ACTIVE.spectral_factor(omega, float(rabi_sq), float(delta), float(gamma_tilde),
                                  complex(prefactor), float(zero_tol))


def tridiag_solve(dl, d, du, b):
    """Solve a complex tridiagonal system; returns (x, info) with info=-1 on success."""
    cast = lambda a: np.ascontiguousarray(a, dtype=np.complex128)
    return ACTIVE.tridiag_solve(cast(dl), cast(d), cast(du), cast(b))


def transfer_sweep(n_steps, a_p, a_c, a_pc, a_cp, s_p, s_c, p_first):
    return ACTIVE.transfer_sweep(int(n_steps), complex(a_p), complex(a_c), complex(a_pc),
                                 complex(a_cp), complex(s_p), complex(s_c), complex(p_first))
