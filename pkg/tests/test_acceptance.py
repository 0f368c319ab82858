"""Acceptance checks, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line with the measured value
next to the tolerance.  Run directly (``python3 tests/test_acceptance.py``)
for the summary without pytest.
"""

import cmath
import math
import sys
import time
import warnings

import numpy as np
import pytest

from optocool import atom, chain, cooling, tables
from optocool.params import CONSTANTS
from optocool.scenario import Scenario, evaluate, fixture_path
from optocool.sweep import run_sweep

C = CONSTANTS.c
# collected for the pytest terminal summary (see conftest.py)
REPORT_LINES = {}


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    REPORT_LINES[number] = line
    if __name__ == "__main__":
        print(line)
    assert ok, line


def oracle_J(w, rabi_sq, delta, gp, gc, Gp, Gc):
    """Closed form written out independently of the package."""
    gt = gp + Gp + gc + Gc
    return gp * gc * C / (2 * math.pi) * 16j * w / (rabi_sq * (-2j * w * gt + 4 * delta * w - 4 * w * w + rabi_sq))


def test_criterion_1_spectral_identity():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst_rel, worst_zero = 0.0, 0.0
    for _ in range(50):
        gp, gc, Gp, Gc = rng.uniform(0.02, 1.0, 4)
        ap, ac = rng.uniform(0.3, 3.0, 2) * 1e-4
        php, phc = rng.uniform(0, 2 * math.pi, 2)
        delta = rng.uniform(-5, 5)
        w = rng.uniform(-4, 4)
        op = cmath.exp(-1j * php) * math.sqrt(2 * C * gp / math.pi) * ap
        oc = cmath.exp(1j * phc) * math.sqrt(2 * C * gc / math.pi) * ac
        system = atom.build_bloch(op, oc, delta, delta, gp, gc, Gp, Gc)
        steady = atom.bare_steady_state(system)
        J = oracle_J(w, abs(op) ** 2 + abs(oc) ** 2, delta, gp, gc, Gp, Gc)
        tp = 2 * math.pi
        expect = {
            ("p", "gd"): ac**2 * tp / gp * J,
            ("c", "gd"): -cmath.exp(-1j * (php + phc)) * ap * ac * tp / math.sqrt(gp * gc) * J,
            ("p", "ed"): -cmath.exp(1j * (php + phc)) * ap * ac * tp / math.sqrt(gp * gc) * J,
            ("c", "ed"): ap**2 * tp / gc * J,
        }
        for (ch, pr), val in expect.items():
            got = atom.resolvent_response(system, steady, w, ch, pr)
            worst_rel = max(worst_rel, abs(got - val) / abs(val))
        for ch in ("pd", "cd"):
            for pr in ("gd", "ed"):
                worst_zero = max(worst_zero, abs(atom.resolvent_response(system, steady, w, ch, pr)))
    elapsed = time.perf_counter() - t0
    ok = worst_rel <= 1e-9 and worst_zero <= 1e-12 and elapsed < 1.0
    report(1, ok, f"max rel dev {worst_rel:.2e} (<=1e-9), max |zero identity| {worst_zero:.2e} (<=1e-12), "
                  f"{elapsed:.3f} s (<1 s)")


def test_criterion_2_dark_state():
    rng = np.random.default_rng(202)
    t0 = time.perf_counter()
    worst_coh, worst_pop = 0.0, 0.0
    for _ in range(100):
        op, oc = rng.uniform(0.1, 5.0, 2) * np.exp(1j * rng.uniform(0, 2 * math.pi, 2))
        gp, gc, Gp, Gc = rng.uniform(0.01, 1.0, 4)
        delta = rng.uniform(-5, 5)
        steady = atom.bare_steady_state(atom.build_bloch(op, oc, delta, delta, gp, gc, Gp, Gc))
        worst_coh = max(worst_coh, np.abs(steady.optical_coherences).max())
        norm = abs(op) ** 2 + abs(oc) ** 2
        pg, pe, pd = steady.populations
        worst_pop = max(worst_pop, abs(pg - abs(oc) ** 2 / norm), abs(pe - abs(op) ** 2 / norm), abs(pd))
    elapsed = time.perf_counter() - t0
    ok = worst_coh < 1e-12 and worst_pop <= 1e-10 and elapsed < 1.0
    report(2, ok, f"max optical coherence {worst_coh:.2e} (<1e-12), max population dev {worst_pop:.2e} "
                  f"(<=1e-10), {elapsed:.3f} s (<1 s)")


def test_criterion_3_sideband_asymmetry():
    nu = 1.0
    op = oc = 4 * nu
    loss = 0.3 * nu
    ratios = {}
    for strategy in ("bs", "tms"):
        delta = cooling.design_detuning(strategy, op, oc, nu)
        J = atom.spectral_factor_array([nu, -nu], op, oc, delta, 0.03, 0.03, loss - 0.03, loss - 0.03)
        ratios[strategy] = abs(J[0]) / abs(J[1])
    # direct oracle: only the resonance term differs between the two sidebands
    direct = abs(complex(56, 1.2)) / 1.2
    blue, red = ratios["bs"], 1.0 / ratios["tms"]
    ok = abs(blue - 46.7) <= 0.5 and abs(red - 46.7) <= 0.5 and abs(blue - direct) < 1e-9 * direct
    report(3, ok, f"BS |J(nu)|/|J(-nu)| = {blue:.4f}, TMS |J(-nu)|/|J(nu)| = {red:.4f} "
                  f"(46.7 +- 0.5, oracle {direct:.4f})")


def _chain_inputs(n, per_atom, n_occ=1.0):
    J = per_atom * cmath.exp(1j * 2.2)  # Re J < 0 as for any physical spectral factor
    return chain.ChainInputs(n, 1.0, J, J, 0.8 + 0.0j, 1.0, n_occ=n_occ)


def test_criterion_4_chain_oracle():
    t0 = time.perf_counter()

    def deviation(n, per_atom):
        inp = _chain_inputs(n, per_atom)
        worst = 0.0
        for branch in (chain.RED, chain.BLUE):
            exact = chain.solve_chain_exact(inp, branch).branch(branch)[0][0]
            closed = chain.solve_chain_closed_form(inp, branch)
            worst = max(worst, abs(closed - exact) / abs(exact))
        return worst

    dev200 = deviation(200, 5e-6)
    sizes = np.array([50, 100, 200, 400])
    eta = 1e-3
    devs = np.array([deviation(int(n), eta / n) for n in sizes])
    slope = np.polyfit(np.log(sizes), np.log(devs), 1)[0]
    elapsed = time.perf_counter() - t0
    ok = dev200 <= 1e-4 and abs(slope + 1) <= 0.1 and elapsed < 5.0
    report(4, ok, f"N=200 rel dev {dev200:.2e} (<=1e-4), log-log slope {slope:.4f} (-1 +- 0.1), "
                  f"{elapsed:.3f} s (<5 s)")


def test_criterion_5_conservation():
    rng = np.random.default_rng(505)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 500))
        J = rng.uniform(1e-4, 1e-1) * cmath.exp(1j * rng.uniform(math.pi / 2, 3 * math.pi / 2))
        ph = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        inp = chain.ChainInputs(n, rng.uniform(0.1, 2), J, J * rng.uniform(0.1, 2), rng.uniform(0.1, 2),
                                ph, n_occ=rng.uniform(0, 5))
        for branch in (chain.RED, chain.BLUE):
            P, Cc = chain.solve_chain_exact(inp, branch).branch(branch)
            scale = max(np.abs(P).max(), np.abs(Cc).max())
            # red sideband carried from control to probe: P_i - P_{i+1} = C_i - C_{i+1}
            worst = max(worst, np.abs((P[:-1] - P[1:]) - (Cc[:-1] - Cc[1:])).max() / scale)
    report(5, worst <= 1e-12, f"max relative conversion violation {worst:.2e} (<=1e-12)")


def test_criterion_6_signs_and_floor():
    rng = np.random.default_rng(606)
    bad = 0
    for _ in range(100):
        op, oc = rng.uniform(0.5, 6, 2)
        gp, gc = rng.uniform(0.005, 0.1, 2)
        Gp, Gc = rng.uniform(0.05, 0.5, 2)
        delta = rng.uniform(-8, 8)
        jp, jm = atom.spectral_factor_array([1.0, -1.0], op, oc, delta, gp, gc, Gp, Gc)
        alpha_sq = rng.uniform(0.1, 10) / (abs(jp) + abs(jm))
        n = int(rng.integers(1, 300))
        mu_p, mu_c = rng.uniform(0.1, 3, 2)
        for ph in (1.0, -1.0):
            inp = chain.ChainInputs(n, alpha_sq, jp, jm, mu_c, ph)
            exact = cooling.rates_from_chain(mu_p, inp)
            closed = cooling.assemble_rates(mu_p, mu_c, inp.eta_plus, inp.eta_minus, ph)
            for r in (exact, closed):
                if ph > 0 and not (r.LambdaPlus < 0 < r.LambdaMinus):
                    bad += 1
                if ph < 0 and not (r.LambdaMinus < 0 < r.LambdaPlus):
                    bad += 1
    worst_floor, below = 0.0, 0
    for _ in range(100):
        mu_p, mu_c = rng.uniform(0.1, 3, 2)
        rates = cooling.assemble_rates(mu_p, mu_c, math.inf, 0.0, 1.0)
        n_ss = cooling.steady_state_occupation(rates, include_env=False)
        expect = (mu_p**2 + mu_c**2) / (2 * mu_p * mu_c)
        worst_floor = max(worst_floor, abs(n_ss - expect) / expect)
        below += n_ss < 1.0
    mu = 1.7
    equal = cooling.steady_state_occupation(cooling.assemble_rates(mu, mu, math.inf, 0.0, 1.0), include_env=False)
    ok = bad == 0 and worst_floor <= 1e-12 and below == 0 and abs(equal - 1.0) <= 1e-15
    report(6, ok, f"{bad} sign violations in 400 rate sets, floor formula dev {worst_floor:.2e}, "
                  f"{below} draws below 1, n_ss(mu_p=mu_c) - 1 = {equal - 1.0:.1e}")


def test_criterion_7_sec6_regression():
    t0 = time.perf_counter()
    sc = Scenario.load(fixture_path("sec6_diamond"))
    n_th = sc.environment.n_thermal
    rates = sc.rates()
    n_ss = cooling.steady_state_occupation(rates)
    t_relax = 60.0 / -rates.drift()
    n_end = cooling.evolve_occupation(6500.0, rates, [0.0, t_relax])[-1]
    elapsed = time.perf_counter() - t0
    relax_dev = abs(n_end - n_ss) / n_ss
    ok = (abs(n_th - 6500) <= 0.02 * 6500 and 2.0 / 1.5 <= n_ss <= 2.0 * 1.5 and relax_dev <= 1e-8
          and elapsed < 1.0)
    report(7, ok, f"n_thermal {n_th:.1f} (6500 +- 2%), n_ss {n_ss:.4f} (2 within x1.5), "
                  f"evolve rel dev {relax_dev:.1e} (<=1e-8), {elapsed:.3f} s (<1 s)")


def test_criterion_8_detuning_design():
    nu = 1.0
    rng = np.random.default_rng(808)
    worst_res = 0.0
    for _ in range(50):
        op, oc = rng.uniform(0.1, 10, 2)
        for strategy, w in (("bs", nu), ("tms", -nu)):
            d = cooling.design_detuning(strategy, op, oc, nu)
            scale = op**2 + oc**2 + 4 * nu**2
            worst_res = max(worst_res, abs(4 * d * w - 4 * w * w + op**2 + oc**2) / scale)
    shifts = {}
    # few-atom cloud: the designed detuning maximises |J| on the resonant sideband
    for name in ("sideband_bs", "sideband_tms"):
        doc = Scenario.load(fixture_path(name)).to_document()
        doc["cloud"]["n_atoms"] = 10
        base = Scenario.from_document(doc)
        designed = base.cloud.delta / base.nu
        coarse = run_sweep(base, [("cloud.delta_over_nu", np.linspace(-14, 14, 2801).tolist())])
        x0 = coarse.column("cloud.delta_over_nu")[np.argmin(coarse.column("n_ss"))]
        fine = run_sweep(base, [("cloud.delta_over_nu", np.linspace(x0 - 0.02, x0 + 0.02, 4001).tolist())])
        best = fine.column("cloud.delta_over_nu")[np.argmin(fine.column("n_ss"))]
        shifts[name] = abs(best - designed)
    ok = worst_res <= 4 * np.finfo(float).eps and max(shifts.values()) <= 1e-3
    report(8, ok, f"resonance residual {worst_res:.1e} (machine precision), sweep optimum offset "
                  f"BS {shifts['sideband_bs']:.1e} nu, TMS {shifts['sideband_tms']:.1e} nu (<=1e-3 nu)")


def test_criterion_9_determinism():
    base = Scenario.load(fixture_path("sideband_tms"))
    axes = [("cloud.delta_over_nu", np.linspace(5, 9, 41).tolist()), ("cloud.n_atoms", [1, 10, 100, 1000])]
    outputs = set()
    for workers in (1, 1, 2, 4, 8):
        res = run_sweep(base, axes, workers=workers)
        outputs.add(tables.to_csv(res.columns, list(res.rows())))
    report(9, len(outputs) == 1, f"{len(outputs)} distinct CSV outputs over 5 runs with 1/1/2/4/8 workers")


if __name__ == "__main__":
    warnings.simplefilter("ignore")
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
