"""Command-line front end.

    optocool <spectrum|steady|evolve|sweep|optimize|design> --scenario FILE [flags]

Exit codes: 0 success, 2 input error, 3 physical divergence, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import cooling, tables
from .errors import NumericalError, OptocoolError, ScenarioError
from .scenario import RECORD_FIELDS, Scenario, evaluate, fixture_path
from .sweep import minimize_nss, run_sweep

EXIT_OK, EXIT_INPUT, EXIT_DIVERGENT, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _number_list(text):
    """``START:STOP:NUM`` (inclusive linspace) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range {text!r} must be START:STOP:NUM")
        start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        if num < 1:
            raise UsageError(f"range {text!r} needs NUM >= 1")
        return np.linspace(start, stop, num).tolist()
    return [_scalar(v) for v in text.split(",") if v.strip()]


def _scalar(text):
    text = text.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _split_spec(spec, flag):
    if "=" not in spec:
        raise UsageError(f"{flag} {spec!r} must look like PATH=VALUES")
    path, values = spec.split("=", 1)
    if not path.strip() or not values.strip():
        raise UsageError(f"{flag} {spec!r} must look like PATH=VALUES")
    return path.strip(), values


def parse_axis(spec):
    path, values = _split_spec(spec, "--axis")
    try:
        vals = _number_list(values)
    except ValueError as exc:
        raise UsageError(f"--axis {spec!r}: {exc}") from None
    if not vals:
        raise UsageError(f"--axis {spec!r} has no values")
    return path, vals


def parse_free(spec):
    """``PATH=LO:HI`` for a continuous parameter, ``PATH=a,b,...`` for a choice list."""
    path, values = _split_spec(spec, "--free")
    if ":" in values:
        parts = values.split(":")
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except (ValueError, IndexError):
            raise UsageError(f"--free {spec!r} must be PATH=LO:HI or PATH=a,b,...") from None
        if len(parts) != 2:
            raise UsageError(f"--free {spec!r} must be PATH=LO:HI or PATH=a,b,...")
        return path, (lo, hi)
    return path, [_scalar(v) for v in values.split(",") if v.strip()]


def _load(args) -> Scenario:
    src = args.scenario
    if src.startswith("fixture:"):
        src = fixture_path(src.split(":", 1)[1])
    return Scenario.load(src)


def _emit(args, columns, rows):
    text = tables.to_json(columns, rows) if args.format == "json" else tables.to_csv(columns, rows)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(args):
    sc = _load(args)
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    nu = sc.nu
    x = np.linspace(args.omega_min, args.omega_max, args.points)
    J = sc.spectral_factors(x * nu)
    norm = {"plus": abs(sc.J_pm[0]), "minus": abs(sc.J_pm[1]), "none": 1.0}[args.normalize]
    if norm == 0:
        raise NumericalError(f"cannot normalise by |J| at the {args.normalize} sideband: it vanishes")
    Jn = J / norm
    rows = [(float(w), float(z.real), float(z.imag), float(abs(z))) for w, z in zip(x, Jn)]
    _emit(args, ["omega_over_nu", "re_J", "im_J", "abs_J"], rows)
    return EXIT_OK


def cmd_steady(args):
    sc = _load(args)
    rec = evaluate(sc)
    rec["dark_residual"] = sc.dark_state_residual()
    columns = list(RECORD_FIELDS) + ["dark_residual"]
    _emit(args, columns, [[rec[c] for c in columns]])
    return EXIT_DIVERGENT if rec["divergent"] else EXIT_OK


def cmd_evolve(args):
    sc = _load(args)
    if args.t_max < 0:
        raise UsageError("--t-max must be non-negative")
    if args.points < 1:
        raise UsageError("--points must be positive")
    t = np.array([0.0]) if args.t_max == 0 else np.linspace(0.0, args.t_max, args.points)
    rates = sc.rates()
    n0 = sc.environment.n_thermal if args.n0 is None else args.n0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        n = cooling.evolve_occupation(n0, rates, t)
    _emit(args, ["t_s", "n"], [(float(a), float(b)) for a, b in zip(t, n)])
    return EXIT_DIVERGENT if rates.drift() >= 0 else EXIT_OK


def cmd_sweep(args):
    sc = _load(args)
    axes = [parse_axis(s) for s in args.axis or []]
    result = run_sweep(sc, axes, workers=args.workers)
    _emit(args, result.columns, list(result.rows()))
    return EXIT_OK


def cmd_optimize(args):
    sc = _load(args)
    free = [parse_free(s) for s in args.free or []]
    if not 1 <= len(free) <= 2:
        raise UsageError("optimize needs one or two --free parameters")
    res = minimize_nss(sc, free, coarse_points=args.coarse_points)
    columns = list(res.point) + list(RECORD_FIELDS)
    _emit(args, columns, [[res.point[p] for p in res.point] + [res.record[c] for c in RECORD_FIELDS]])
    return EXIT_OK


def cmd_design(args):
    sc = _load(args)
    strategy = cooling.Strategy.parse(args.strategy or (sc.strategy.kind if sc.strategy else "tms"))
    index = args.index if args.index is not None else (sc.strategy.placement_index if sc.strategy else 0)
    op, oc = sc.rabi
    delta = cooling.design_detuning(strategy, op, oc, sc.nu)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        where = cooling.design_position(strategy, sc.nu, index)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    doc = sc.to_document()
    cloud = doc["cloud"]
    for key in ("delta_rad_s", "xbar_m", "phase_rad"):
        cloud.pop(key, None)
    cloud["delta_over_nu"] = delta / sc.nu
    cloud["placement"] = {"strategy": strategy.value, "index": index}
    designed = Scenario.from_document(doc)
    rec = evaluate(designed)
    mu_p, mu_c = designed.mu
    cross = mu_p * mu_c
    if cross > 0:
        floor = (mu_p**2 + mu_c**2 - (2 * cross if strategy is cooling.Strategy.TMS_SUPPRESS else 0.0)) / (2 * cross)
    else:
        floor = math.inf
    columns = ["strategy", "delta_rad_s", "delta_over_nu", "xbar_m", "tau_s", "phase", "feasible",
               "n_ss_ideal", "N0", "LambdaPlus", "LambdaMinus", "n_ss", "divergent"]
    row = [strategy.value, delta, delta / sc.nu, where.xbar, where.tau, where.phase, where.feasible,
           floor, rec["N0"], rec["LambdaPlus"], rec["LambdaMinus"], rec["n_ss"], rec["divergent"]]
    _emit(args, columns, [row])
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="optocool", description="Cavity-free optomechanical cooling by a remote Lambda-atom cloud.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--scenario", required=True,
                       help="scenario JSON file, or fixture:NAME for a shipped fixture")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", help="write the table here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("spectrum", cmd_spectrum, "spectral factor J(omega) on a frequency grid")
    p.add_argument("--omega-min", type=float, default=-3.0, help="in units of nu")
    p.add_argument("--omega-max", type=float, default=3.0, help="in units of nu")
    p.add_argument("--points", type=int, default=601)
    p.add_argument("--normalize", choices=("plus", "minus", "none"), default="none")

    add("steady", cmd_steady, "rates and steady-state occupation")

    p = add("evolve", cmd_evolve, "occupation n(t)")
    p.add_argument("--n0", type=float, help="initial occupation (default: thermal occupation)")
    p.add_argument("--t-max", type=float, required=True, help="seconds")
    p.add_argument("--points", type=int, default=201)

    p = add("sweep", cmd_sweep, "grid sweep over scenario parameters")
    p.add_argument("--axis", action="append", metavar="PATH=START:STOP:NUM|v1,v2",
                   help="repeatable; PATH may join several keys with '+'")
    p.add_argument("--workers", type=int, help="worker threads (capped by OPTOCOOL_THREADS)")

    p = add("optimize", cmd_optimize, "minimise n_ss over one or two parameters")
    p.add_argument("--free", action="append", metavar="PATH=LO:HI|a,b")
    p.add_argument("--coarse-points", type=int, default=101)

    p = add("design", cmd_design, "recommended detuning and cloud placement")
    p.add_argument("--strategy", choices=("bs", "tms"))
    p.add_argument("--index", type=int, help="placement index n >= 0")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"optocool: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScenarioError as exc:
        print(f"optocool: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"optocool: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OptocoolError as exc:
        print(f"optocool: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
