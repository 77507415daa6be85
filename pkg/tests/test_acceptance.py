"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line through the ``verdict`` fixture; the lines
are repeated in the terminal summary.  Criteria marked ``longrun`` need
``--longrun``.
"""

import math
import time

import numpy as np
import pytest

from oracles import dense_laplacian, expm_ss
from sifrk import suites
from sifrk import benchmarks as bm
from sifrk.diagnostics import convergence_rates, curve_csv
from sifrk.nonlinearity import N0, StabilizedNonlinearity, cubic, flory_huggins
from sifrk.spectral import Field, Grid, OperatorSymbol, apply_exp
from sifrk.stepper import SchemeInstance, integrate
from sifrk.tableau import (Verdict, butcher_to_shu_osher, certify_mbp_butcher,
                           certify_mbp_shu_osher, g_derivative, g_function, get_tableau,
                           is_close_tableau, shu_osher_to_butcher)

CERTIFIED = ["sifrk11", "sifrk22", "sifrk32", "sifrk42", "heun33"]


# 1 ----------------------------------------------------------------------------

def test_criterion_1_certification_verdicts(verdict):
    start = time.perf_counter()
    got = {}
    for name in CERTIFIED:
        got[name] = (certify_mbp_butcher(get_tableau(name)).verdict, None, None)
    for name in ("ssp-sifrk22", "ssp-sifrk33"):
        t = get_tableau(name)
        r = certify_mbp_shu_osher(t)
        f = r.first_failure()
        i, j = f.witness
        got[name] = (r.verdict, f.witness, t.beta[i, j] / t.alpha[i, j])
    elapsed = time.perf_counter() - start

    ok = all(got[n][0] is Verdict.CERTIFIED for n in CERTIFIED)
    v22, w22, r22 = got["ssp-sifrk22"]
    v33, w33, r33 = got["ssp-sifrk33"]
    ok &= v22 is Verdict.REFUTED and w22 == (2, 1) and abs(r22 - 1.0) < 1e-14
    ok &= v33 is Verdict.REFUTED and w33 == (2, 1) and abs(r33 - 4 / 3) < 1e-14
    ok &= elapsed < 1.0
    assert verdict("1 certification verdicts", ok,
                   f"certified {CERTIFIED}; ssp-sifrk22 witness {w22} ratio {r22:.6f}; "
                   f"ssp-sifrk33 witness {w33} ratio {r33:.6f}; {elapsed:.2f}s (< 1 s)")


# 2 ----------------------------------------------------------------------------

def test_criterion_2_operator_oracle(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    worst = 0.0
    cases = 0
    setups = [(dim, bc) for dim in (1, 2) for bc in ("periodic", "neumann")]
    mats = {}
    for k in range(50):
        dim, bc = setups[k % len(setups)]
        g = Grid.uniform(dim, 8, bc=bc)
        diff = float(rng.uniform(1e-3, 1.0))
        kappa = float(rng.uniform(0.0, 5.0))
        t = float(rng.uniform(0.0, 1.0))
        key = (dim, bc)
        if key not in mats:
            mats[key] = dense_laplacian(g.n, g.h, bc)
        A = diff * mats[key] - kappa * np.eye(g.size)
        u = Field(g, rng.uniform(-1, 1, g.shape))
        ref = expm_ss(t * A) @ u.data.ravel()
        got = apply_exp(OperatorSymbol(g, diff, kappa), t, u).data.ravel()
        worst = max(worst, float(np.max(np.abs(got - ref)) / np.max(np.abs(ref))))
        cases += 1
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < 5.0
    assert verdict("2 apply_exp vs dense oracle", ok,
                   f"{cases} cases, worst relative sup error {worst:.2e} (< 1e-10); {elapsed:.2f}s (< 5 s)")


# 3 ----------------------------------------------------------------------------

def test_criterion_3_unconditional_mbp(verdict):
    start = time.perf_counter()
    g = Grid.uniform(2, 128)
    problems = {"cubic": (cubic(1.0), 2.0), "flory_huggins": (flory_huggins(0.8, 1.6), 8.02)}
    failures = []
    worst_excess = -math.inf
    runs = 0
    for pname, (spec, kappa) in problems.items():
        sn = StabilizedNonlinearity(spec, kappa)
        sym = OperatorSymbol(g, 0.01**2, sn.kappa)
        gamma = spec.gamma
        for si_name in CERTIFIED:
            t = get_tableau(si_name)
            for tau in (0.01, 0.1, 1.0, 10.0, 100.0):
                si = SchemeInstance(t, sym, sn, tau)
                u = np.random.default_rng(runs).uniform(-0.9 * gamma, 0.9 * gamma, g.shape)
                runs += 1
                for n in range(1, 21):
                    norms = []
                    u = si.step(u, norms)
                    worst_excess = max(worst_excess, max(norms) - gamma)
                    if max(norms) > gamma + 1e-12:
                        failures.append(f"{pname}/{si_name}/tau={tau:g} step {n}")
                        break
                    if n == 1:
                        bound = g_function(t, t.s, kappa * tau) * gamma
                        if norms[-1] > bound + 1e-12:
                            failures.append(f"{pname}/{si_name}/tau={tau:g} first-step bound")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120.0
    assert verdict("3 unconditional MBP property suite", ok,
                   f"{runs} runs x 20 steps, max(stage norm - gamma) = {worst_excess:.3e}; "
                   f"failures {failures[:3]}; {elapsed:.1f}s (< 120 s)")


# 4 ----------------------------------------------------------------------------

def test_criterion_4_temporal_desk(verdict, tmp_path):
    start = time.perf_counter()
    res = suites.temporal(tmp_path, desk=True)
    elapsed = time.perf_counter() - start
    ok = res.ok and elapsed < 600.0
    detail = "; ".join(f"{c.name} -> {c.detail}" for c in res.checks)
    assert verdict("4 temporal convergence (h=1/512)", ok, f"{detail}; {elapsed:.0f}s (< 600 s)")


@pytest.mark.longrun
def test_criterion_4_full_tables(verdict, tmp_path):
    res = suites.temporal(tmp_path, desk=False)
    detail = "; ".join(c.line() for c in res.checks)
    assert verdict("4 full-resolution tables (h=1/2048) to 2 significant figures", res.ok, detail)


# 5 ----------------------------------------------------------------------------

def test_criterion_5_spatial(verdict, tmp_path):
    start = time.perf_counter()
    res = suites.spatial(tmp_path, desk=True)
    elapsed = time.perf_counter() - start
    ok = res.ok and elapsed < 300.0
    detail = "; ".join(f"{c.name} -> {c.detail}" for c in res.checks)
    assert verdict("5 spatial convergence (h=1/32..1/256)", ok, f"{detail}; {elapsed:.0f}s (< 300 s)")


# 6 ----------------------------------------------------------------------------

def _violation(t_cert):
    start = time.perf_counter()
    v = bm.run_mbp_violation_demo(n=256, tau=0.1, t_certified=t_cert, stride=10)
    elapsed = time.perf_counter() - start
    ft = v.ssp_flag_time
    in_window = ft is not None and 4.0 <= ft <= 8.0
    m = v.certified.monitor
    ok = in_window and not m.flagged and v.certified.result.T == pytest.approx(t_cert)
    return ok, elapsed, (f"SSP-sIFRK(2,2) first exceeds 1 at t={ft} (window [4, 8]); "
                         f"sIFRK(2,2) max sup norm {m.max_norm:.15f} through t={t_cert:g}")


def test_criterion_6_violation_demo(verdict):
    ok, elapsed, detail = _violation(50.0)
    ok = ok and elapsed < 180.0
    assert verdict("6 MBP violation demo (certified run to t=50)", ok,
                   f"{detail}; {elapsed:.0f}s (< 180 s)")


@pytest.mark.longrun
def test_criterion_6_violation_full(verdict):
    ok, elapsed, detail = _violation(440.0)
    assert verdict("6 MBP violation demo (certified run to t=440)", ok, f"{detail}; {elapsed:.0f}s")


# 7 ----------------------------------------------------------------------------

def test_criterion_7_bubble_to_100(verdict):
    start = time.perf_counter()
    r = bm.run_bubble(n=256, tau=0.01, t_end=100.0, snapshot_times=(50, 100), stride=500)
    elapsed = time.perf_counter() - start
    radii = [r.radii.get(50.0), r.radii.get(100.0)]
    ok = None not in radii and radii[1] <= radii[0] and radii[1] > 0
    assert verdict("7 bubble shrinkage to t=100 (h=1/256)", ok,
                   f"slice radius t=50: {radii[0]}, t=100: {radii[1]}; {elapsed:.0f}s")


@pytest.mark.longrun
def test_criterion_7_bubble_full(verdict, tmp_path):
    res = suites.bubble(tmp_path, desk=True)
    detail = "; ".join(c.line() for c in res.checks)
    assert verdict("7 bubble benchmark to t=330 (h=1/256)", res.ok, detail)


# 8 ----------------------------------------------------------------------------

def _n0_bounds():
    rng = np.random.default_rng(8)
    for spec, kappa in ((cubic(1.0), 2.0), (flory_huggins(0.8, 1.6), 8.02)):
        sn = StabilizedNonlinearity(spec, kappa)
        g = spec.gamma
        a, b = rng.uniform(-g, g, 100_000), rng.uniform(-g, g, 100_000)
        tol = 1e-12 * max(1.0, kappa * g)
        if np.max(np.abs(N0(sn, a))) > kappa * g + tol:
            return "N0 bound"
        if np.any(np.abs(N0(sn, a) - N0(sn, b)) > 2 * kappa * np.abs(a - b) + tol):
            return "N0 Lipschitz"
    return None


def _exp_properties():
    rng = np.random.default_rng(9)
    for bc in ("periodic", "neumann"):
        g = Grid.uniform(2, 16, bc=bc)
        sym = OperatorSymbol(g, 0.1, 1.0)
        for _ in range(200):
            u = Field(g, rng.uniform(-1, 1, g.shape))
            t = float(rng.uniform(0, 2))
            if np.max(np.abs(apply_exp(sym, t, u).data)) > math.exp(-t) * np.max(np.abs(u.data)) + 1e-14:
                return f"contraction ({bc})"
            t1, t2 = rng.uniform(0, 0.5, 2)
            a = apply_exp(sym, t1, apply_exp(sym, t2, u)).data
            b = apply_exp(sym, t1 + t2, u).data
            if np.max(np.abs(a - b)) > 1e-13:
                return f"semigroup ({bc})"
    return None


def _g_derivative_fd():
    for name in CERTIFIED + ["ssp-sifrk22", "ssp-sifrk33"]:
        t = get_tableau(name)
        b = t if not hasattr(t, "alpha") else shu_osher_to_butcher(t)
        for i in range(1, b.s + 1):
            for x in (0.1, 1.0, 5.0, 30.0):
                h = 1e-6 * max(1.0, x)
                fd = (g_function(b, i, x + h) - g_function(b, i, x - h)) / (2 * h)
                if abs(fd - g_derivative(b, i, x)) > 1e-6:
                    return f"g' of {name} stage {i} at {x}"
    return None


def _roundtrip_and_trajectory():
    g = Grid.uniform(2, 32)
    sn = StabilizedNonlinearity(cubic(1.0), 2.0)
    sym = OperatorSymbol(g, 1e-3, 2.0)
    u0 = Field(g, np.random.default_rng(3).uniform(-0.9, 0.9, g.shape))
    alphas = {"sifrk22": [[1.0], [0.5, 0.5]], "sifrk32": [[1.0], [0.5, 0.5], [0.25, 0.25, 0.5]]}
    for name, alpha in alphas.items():
        t = get_tableau(name)
        so = butcher_to_shu_osher(t, alpha)
        if not is_close_tableau(shu_osher_to_butcher(so), t):
            return f"round trip {name}"
        a = integrate(SchemeInstance(t, sym, sn, 0.1), u0, 5.0, energy=False).field.data
        b = integrate(SchemeInstance(so, sym, sn, 0.1), u0, 5.0, energy=False).field.data
        if np.max(np.abs(a - b)) > 1e-10:
            return f"trajectory {name}"
    return None


def _rates_power_law():
    rng = np.random.default_rng(10)
    for _ in range(100):
        p, C = rng.uniform(0.5, 4.0), rng.uniform(1e-3, 10.0)
        table = convergence_rates([(2.0**-k, C * 2.0 ** (-p * k)) for k in range(6)])
        if any(abs(r.l2_rate - p) > 1e-9 for r in table.rows[1:]):
            return "power-law rates"
    return None


def _csv_determinism():
    p = bm.random_cubic_problem(32, seed=bm.DEFAULT_SEED)
    texts = []
    for _ in range(2):
        res = integrate(p.scheme(get_tableau("sifrk22"), 0.1), p.u0(), 2.0, stride=2)
        texts.append(curve_csv(res.records).encode())
    return None if texts[0] == texts[1] else "curve CSV differs between runs"


def test_criterion_8_property_suite(verdict):
    start = time.perf_counter()
    checks = {"N0 bounds": _n0_bounds, "exp": _exp_properties, "g'": _g_derivative_fd,
              "forms": _roundtrip_and_trajectory, "rates": _rates_power_law, "csv": _csv_determinism}
    fails = [msg for msg in (f() for f in checks.values()) if msg]
    elapsed = time.perf_counter() - start
    ok = not fails and elapsed < 30.0
    assert verdict("8 property suite", ok,
                   f"{', '.join(checks)} checked; failures {fails}; {elapsed:.1f}s (< 30 s)")
