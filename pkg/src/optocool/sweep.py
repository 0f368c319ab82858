"""Grid sweeps and derivative-free minimisation of the steady occupation.

Parameter paths address the scenario document (``cloud.delta_over_nu``,
``probe.power_mw`` ...).  Several paths joined with ``+`` are set to the same
value, e.g. ``probe.power_mw+control.power_mw``.
"""

from __future__ import annotations

import copy
import functools
import itertools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, OptocoolError, ScenarioError
from .scenario import RECORD_FIELDS, Scenario, _leaf_validator, evaluate, set_path, validate_document

MAX_POINTS = 10**7
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def worker_count(requested=None) -> int:
    cap = os.environ.get("OPTOCOOL_THREADS")
    n = requested if requested is not None else (int(cap) if cap else 1)
    if cap:
        n = min(n, int(cap))
    return max(1, int(n))


def _targets(path):
    return [p.strip() for p in path.split("+") if p.strip()]


def apply_point(base_doc, paths, values) -> dict:
    doc = copy.deepcopy(base_doc)
    for path, value in zip(paths, values):
        for target in _targets(path):
            set_path(doc, target, value)
    return doc


def _check_paths(paths, values=None):
    """Reject unknown paths, and (when given) axis values outside the leaf schema."""
    for k, path in enumerate(paths):
        targets = _targets(path)
        if not targets:
            raise ScenarioError(f"empty parameter path {path!r}")
        for target in targets:
            validator = _leaf_validator(target)
            for value in (values[k] if values is not None else []):
                err = next(iter(validator.iter_errors(value)), None)
                if err is not None:
                    raise ScenarioError(f"{target}: value {value!r}: {err.message}")


def _evaluate_point(base_doc, paths, values) -> dict:
    try:
        doc = apply_point(base_doc, paths, values)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return {**evaluate(Scenario.from_document(doc, prevalidated=True)), "error": ""}
    except (OptocoolError, ArithmeticError, ValueError) as exc:
        rec = {k: math.nan for k in RECORD_FIELDS}
        rec["divergent"] = False
        rec["error"] = f"{type(exc).__name__}: {exc}"
        return rec


@dataclass(frozen=True)
class SweepResult:
    axes: list
    records: list = field(repr=False)

    @property
    def columns(self):
        return [name for name, _ in self.axes] + list(RECORD_FIELDS) + ["error"]

    def rows(self):
        for rec in self.records:
            yield [rec[c] for c in self.columns]

    def column(self, name) -> np.ndarray:
        return np.array([rec[name] for rec in self.records])


def run_sweep(base: Scenario, axes, workers=None, max_points=MAX_POINTS) -> SweepResult:
    """Evaluate the Cartesian product of ``axes`` = [(path, values), ...] in row-major order."""
    axes = [(str(path), list(values)) for path, values in axes]
    base_doc = base.to_document()
    validate_document(base_doc)
    paths = [p for p, _ in axes]
    _check_paths(paths, [v for _, v in axes])
    total = math.prod(len(v) for _, v in axes) if axes else 1
    if total > max_points:
        raise DomainError(f"sweep grid has {total} points, above the limit of {max_points}")
    grid = list(itertools.product(*[v for _, v in axes]))
    task = functools.partial(_evaluate_point, base_doc, paths)
    n_workers = worker_count(workers)
    if n_workers == 1:
        results = list(map(task, grid))
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(task, grid))
    records = [{**dict(zip(paths, point)), **rec} for point, rec in zip(grid, results)]
    return SweepResult(axes, records)


# -- optimisation ------------------------------------------------------------

class _Objective:
    """Memoised n_ss at a parameter point; divergent or failed points cost inf."""

    def __init__(self, base_doc, paths):
        self.base_doc = base_doc
        self.paths = paths
        self.cache = {}

    def __call__(self, values):
        key = tuple(values)
        if key not in self.cache:
            rec = _evaluate_point(self.base_doc, self.paths, values)
            val = rec["n_ss"]
            self.cache[key] = (val if (not rec["error"] and math.isfinite(val)) else math.inf, rec)
        return self.cache[key]


def golden_section(f, lo, hi, xtol):
    """Minimise a unimodal f on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _minimize_1d(g, bounds, coarse_points, rtol):
    """Coarse grid then golden-section refinement inside the best bracket."""
    if not isinstance(bounds, tuple):  # categorical choice list
        vals = [(g(v), i, v) for i, v in enumerate(bounds)]
        best = min(vals, key=lambda t: (t[0], t[1]))
        return best[2], best[0]
    lo, hi = float(bounds[0]), float(bounds[1])
    if hi < lo:
        raise DomainError(f"empty bounds ({lo}, {hi})")
    if hi == lo:
        return lo, g(lo)
    grid = np.linspace(lo, hi, coarse_points)
    vals = [g(float(x)) for x in grid]
    k = int(np.argmin(vals))
    if not math.isfinite(vals[k]):
        return float(grid[k]), vals[k]
    a = float(grid[max(k - 1, 0)])
    b = float(grid[min(k + 1, coarse_points - 1)])
    x, fx = golden_section(g, a, b, rtol * (hi - lo))
    if vals[k] < fx:
        return float(grid[k]), vals[k]
    return x, fx


@dataclass(frozen=True)
class OptimizeResult:
    point: dict
    n_ss: float
    record: dict = field(repr=False)
    evaluations: int = 0


def _parse_bounds(bounds):
    if isinstance(bounds, tuple) and len(bounds) == 2 and all(isinstance(b, (int, float)) for b in bounds):
        if not all(math.isfinite(b) for b in bounds):
            raise DomainError(f"bounds must be finite, got {bounds}")
        return bounds
    if isinstance(bounds, (list, tuple)) and len(bounds) >= 1:
        return list(bounds)
    raise DomainError(f"bounds must be (lo, hi) or a list of choices, got {bounds!r}")


def minimize_nss(base: Scenario, free, coarse_points=101, xtol=1e-6, ftol=1e-10, max_sweeps=50) -> OptimizeResult:
    """Minimise n_ss over one or two free parameters.

    ``free`` is a list of ``(path, bounds)``; bounds are ``(lo, hi)`` for a
    continuous parameter or a list of admissible values.  Divergent or failed
    points count as infinite cost.
    """
    if not 1 <= len(free) <= 2:
        raise DomainError("minimize_nss takes one or two free parameters")
    base_doc = base.to_document()
    validate_document(base_doc)
    paths = [p for p, _ in free]
    _check_paths(paths)
    bounds = [_parse_bounds(b) for _, b in free]
    f = _Objective(base_doc, paths)
    score = lambda values: f(values)[0]

    # probe the box before searching
    probes = [np.linspace(b[0], b[1], 5).tolist() if isinstance(b, tuple) else b for b in bounds]
    if not any(math.isfinite(score(list(p))) for p in itertools.product(*probes)):
        raise DomainError("steady occupation diverges everywhere on the probe grid of the search box")

    if len(free) == 1:
        x, _ = _minimize_1d(lambda v: score([v]), bounds[0], coarse_points, xtol)
        current = [x]
    else:
        current = [b[0] if not isinstance(b, tuple) else 0.5 * (b[0] + b[1]) for b in bounds]
        if not isinstance(bounds[0], tuple) or not isinstance(bounds[1], tuple):
            # enumerate the categorical axis, optimise the other for each choice
            cat = 0 if not isinstance(bounds[0], tuple) else 1
            other = 1 - cat
            best = None
            for i, choice in enumerate(bounds[cat]):
                def g(v, choice=choice):
                    vals = [None, None]
                    vals[cat], vals[other] = choice, v
                    return score(vals)
                x, fx = _minimize_1d(g, bounds[other], coarse_points, xtol)
                if best is None or fx < best[0]:
                    best = (fx, i, choice, x)
            current[cat], current[other] = best[2], best[3]
        else:
            fbest = score(current)
            for _ in range(max_sweeps):
                prev = fbest
                for axis in (0, 1):
                    def g(v, axis=axis):
                        vals = list(current)
                        vals[axis] = v
                        return score(vals)
                    x, fx = _minimize_1d(g, bounds[axis], coarse_points, xtol)
                    if fx <= fbest:
                        current[axis], fbest = x, fx
                if math.isfinite(prev) and abs(prev - fbest) <= ftol * max(abs(fbest), 1e-300):
                    break
    val, rec = f(current)
    if not math.isfinite(val):
        raise DomainError("no finite steady occupation found in the search box")
    return OptimizeResult(dict(zip(paths, current)), val, rec, evaluations=len(f.cache))
