"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel with the best wall time of each backend.
"""

import argparse
import timeit

import numpy as np

from optocool import _kernels
from optocool.chain import ChainInputs, RED, _tridiagonal_system, recurrence_coefficients


def cases():
    w = np.linspace(-5, 5, 200_001)
    yield "spectral_factor 2e5 pts", lambda k: k.spectral_factor(w, 32.0, -7.0, 0.6, 1e5 + 0j, 1e-12)
    inp = ChainInputs(200_000, 1.0, -1e-6 + 1e-6j, -1e-6 + 1e-6j, 1.0, 1.0, n_occ=1.0)
    bands = _tridiagonal_system(inp.n_atoms, recurrence_coefficients(inp, RED))
    yield "tridiag_solve N=2e5", lambda k: k.tridiag_solve(*bands)
    args = (200_000, 1e-6j, 1e-6j, 1e-6j, 1e-6j, 1e-6, 1e-6, 0j)
    yield "transfer_sweep N=2e5", lambda k: k.transfer_sweep(*args)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels.NUMBA is None:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':26s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speed-up':>9s}")
    for name, call in cases():
        call(_kernels.NUMBA)  # compile outside the timing
        best = {}
        for impl in (_kernels.NUMBA, _kernels.NUMPY):
            best[impl.name] = min(timeit.repeat(lambda: call(impl), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:26s} {best['numba']:11.3f} {best['numpy']:11.3f} {best['numpy'] / best['numba']:9.2f}")


if __name__ == "__main__":
    main()
