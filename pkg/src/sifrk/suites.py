"""Benchmark suites behind ``sifrk bench``.

Each suite runs one family of experiments, writes its CSV artifacts into an
output directory and returns a list of named pass/fail checks.  ``desk=True``
selects the reduced-resolution settings; the full settings use the reference
grids and can take hours.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import benchmarks as bm
from .diagnostics import RateTable, write_curve
from .spectral import write_snapshot
from .tableau import get_tableau

log = logging.getLogger(__name__)

CERTIFIED_SCHEMES = ("sifrk11", "sifrk22", "sifrk32", "sifrk42", "heun33")
RATE_BAND = {1: (0.85, 1.15), 2: (1.85, 2.15), 3: (2.7, 3.3)}
SPATIAL_BAND = (1.8, 2.05)
VIOLATION_WINDOW = (4.0, 8.0)
VANISH_WINDOW = (290.0, 330.0)
BUBBLE_TIMES = (50.0, 100.0, 150.0, 200.0, 250.0, 300.0)

# reference L2 / Linf errors at h = 1/2048, coarsest step first
REFERENCE_TEMPORAL = {
    "sifrk11": ([8.4586e-01, 5.6129e-01, 3.5269e-01, 2.0037e-01, 1.0573e-01, 5.3960e-02],
                [9.9870e-01, 9.7073e-01, 8.1648e-01, 5.3899e-01, 3.0023e-01, 1.5577e-01]),
    "sifrk22": ([8.4566e-01, 4.7032e-01, 2.0091e-01, 6.3380e-02, 1.7488e-02, 4.5077e-03],
                [9.9917e-01, 9.3871e-01, 5.5135e-01, 1.8665e-01, 5.1933e-02, 1.3401e-02]),
    "sifrk32": ([7.3155e-01, 4.0349e-01, 1.6074e-01, 4.8871e-02, 1.3275e-02, 3.3790e-03],
                [9.9722e-01, 8.8763e-01, 4.5403e-01, 1.4456e-01, 3.9471e-02, 1.0052e-02]),
    "sifrk42": ([6.7288e-01, 3.6256e-01, 1.3836e-01, 4.1285e-02, 1.1122e-02, 2.8059e-03],
                [9.9437e-01, 8.4291e-01, 3.9619e-01, 1.2239e-01, 3.3097e-02, 8.3543e-03]),
    "heun33": ([8.8453e-01, 4.5029e-01, 1.4266e-01, 2.7399e-02, 4.1342e-03, 4.6608e-04],
               [9.9956e-01, 9.2778e-01, 4.0876e-01, 8.1593e-02, 1.2337e-02, 1.3954e-03]),
}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}{': ' + self.detail if self.detail else ''}"


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)
    artifacts: list[Path] = field(default_factory=list)
    tables: dict[str, RateTable] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> Check:
        c = Check(name, bool(passed), detail)
        self.checks.append(c)
        log.info(c.line())
        return c

    def report(self) -> str:
        head = f"suite {self.suite}: {'PASS' if self.ok else 'FAIL'}"
        return "\n".join([head] + ["  " + c.line() for c in self.checks])


def _same_2sig(a: float, b: float) -> bool:
    return f"{a:.1e}" == f"{b:.1e}"


def _write_table(res: SuiteResult, out: Path, name: str, table: RateTable) -> None:
    path = out / f"{name}.csv"
    table.write_csv(path)
    res.artifacts.append(path)
    res.tables[name] = table


def _write_curve(res: SuiteResult, out: Path, name: str, records) -> None:
    path = out / f"{name}.csv"
    write_curve(path, records)
    res.artifacts.append(path)


def temporal(out: Path, desk: bool = True, schemes=None, seed: int | None = None) -> SuiteResult:
    """Temporal rates on the traveling wave (2D, ``h = 1/512`` desk or ``1/2048`` full)."""
    res = SuiteResult("temporal")
    schemes = list(schemes or CERTIFIED_SCHEMES)
    n = 512 if desk else 2048
    problem = bm.traveling_wave_problem(n, 2)
    T = bm.traveling_wave_end_time(problem.initial.eps)
    for name in schemes:
        if name not in bm.TEMPORAL_DELTA:
            raise ValueError(f"no temporal ladder for scheme {name!r}")
        taus = bm.temporal_tau_list(name, T)
        table = bm.run_temporal_convergence(get_tableau(name), problem, taus, T, label=name)
        _write_table(res, out, f"temporal_{name}", table)
        lo, hi = RATE_BAND[bm.EXPECTED_ORDER[name]]
        r = table.finest_rate("l2")
        res.add(f"{name} finest L2 rate in [{lo}, {hi}]", lo <= r <= hi, f"{r:.3f}")
        if not desk:
            l2p, lip = REFERENCE_TEMPORAL[name]
            got = [(row.l2, row.linf) for row in table.rows]
            ok = all(_same_2sig(a, b) for (a, _), b in zip(got, l2p)) and \
                all(_same_2sig(a, b) for (_, a), b in zip(got, lip))
            res.add(f"{name} errors match reference table to 2 significant figures", ok,
                    "coarsest L2 {:.4e} vs {:.4e}".format(got[0][0], l2p[0]))
    keys = [f"temporal_{k}" for k in ("sifrk42", "sifrk32", "sifrk22")]
    if all(k in res.tables for k in keys):
        e = [res.tables[k].rows[-1].l2 for k in keys]
        res.add("L2 error ordering sIFRK(4,2) < sIFRK(3,2) < sIFRK(2,2) at smallest tau",
                e[0] < e[1] < e[2], ", ".join(f"{v:.4e}" for v in e))
    return res


def spatial(out: Path, desk: bool = True, schemes=None, seed: int | None = None) -> SuiteResult:
    """Spatial rates of sIFRK(2,2) at ``tau = T/2048``.

    The acceptance check uses the exact traveling-wave profile.  A second
    table compares against a fine-grid solution at ``T/8`` instead; it is
    written for reference and not gated.
    """
    res = SuiteResult("spatial")
    n_list = [32, 64, 128, 256] if desk else [32, 64, 128, 256, 512, 1024]
    eps = bm.TW_EPS
    T = bm.traveling_wave_end_time(eps)
    tau = T / 2048
    tab = get_tableau("sifrk22")
    table = bm.run_spatial_convergence(tab, lambda n: bm.traveling_wave_problem(n, 2), n_list, tau, T)
    _write_table(res, out, "spatial_sifrk22", table)
    lo, hi = SPATIAL_BAND
    for pair in (2, 1):
        r = table.finest_rate("l2", pair)
        res.add(f"spatial L2 rate, pair {len(n_list) - pair} -> {len(n_list) - pair + 1}, in [{lo}, {hi}]",
                lo <= r <= hi, f"{r:.3f} (errors {table.rows[-pair - 1].l2:.4e} -> {table.rows[-pair].l2:.4e})")
    # fronts are still inside the box at T/8; reference has 4x finer grid
    self_tab = bm.run_spatial_self_convergence(tab, lambda n: bm.traveling_wave_problem(n, 1),
                                               n_list, T / 2048, T / 8)
    _write_table(res, out, "spatial_self_sifrk22", self_tab)
    log.info("self-convergence rates: %s", [r.l2_rate for r in self_tab.rows])
    return res


def _mbp_checks(res: SuiteResult, name: str, summary: bm.RunSummary, gamma: float) -> None:
    mon = summary.monitor
    res.add(f"{name} sup norm <= {gamma:.6g} + 1e-12", not mon.flagged,
            f"max {mon.max_norm:.12f}" + (f", flagged at t={mon.flag_time:g}" if mon.flagged else ""))
    ok, at = bm.energy_nonincreasing(summary.records)
    res.add(f"{name} energy nonincreasing (rel slack 1e-8)", ok, "" if ok else f"increase at step {at}")


def mbp(out: Path, desk: bool = True, schemes=None, seed: int | None = None) -> SuiteResult:
    """Flory-Huggins runs with every certified scheme, ``tau = 0.01``, ``kappa = 8.02``."""
    res = SuiteResult("mbp")
    n, T = (256, 5.0) if desk else (1024, 50.0)
    problem = bm.flory_huggins_problem(n, 2, seed=bm.DEFAULT_SEED if seed is None else seed, kappa=8.02)
    for name in schemes or CERTIFIED_SCHEMES:
        summary = bm.run_with_monitor(get_tableau(name), problem, 0.01, T, stride=1, record_stages=True)
        _write_curve(res, out, f"mbp_{name}", summary.records)
        _mbp_checks(res, name, summary, problem.spec.gamma)
    return res


def bubble(out: Path, desk: bool = True, schemes=None, seed: int | None = None,
           t_end: float = 330.0) -> SuiteResult:
    """Shrinking bubble, sIFRK(2,2), ``tau = 0.01``, Neumann."""
    res = SuiteResult("bubble")
    n = 256 if desk else 1024
    times = tuple(t for t in BUBBLE_TIMES if t <= t_end)
    r = bm.run_bubble(n, 0.01, t_end, times, stride=100, keep_snapshots=True)
    _write_curve(res, out, "bubble_curve", r.summary.records)
    for t, f in r.snapshots.items():
        p = out / f"bubble_t{t:g}.sifk"
        write_snapshot(p, f)
        res.artifacts.append(p)
    radii = [r.radii.get(t, math.nan) for t in times]
    mono = all(b <= a for a, b in zip(radii, radii[1:])) and not any(math.isnan(x) for x in radii)
    res.add("slice radius nonincreasing at snapshot times", mono,
            ", ".join(f"t={t:g}: {x:.4f}" for t, x in zip(times, radii)))
    if t_end >= VANISH_WINDOW[1]:
        v = r.vanish_time
        lo, hi = VANISH_WINDOW
        res.add(f"bubble vanishes in [{lo:g}, {hi:g}]", v is not None and lo <= v <= hi,
                "never" if v is None else f"t={v:g}")
    _mbp_checks(res, "sifrk22", r.summary, 1.0)
    return res


def violation(out: Path, desk: bool = True, schemes=None, seed: int | None = None) -> SuiteResult:
    """SSP-sIFRK(2,2) vs sIFRK(2,2) on identical random data at ``tau = 0.1``."""
    res = SuiteResult("violation")
    t_cert = 50.0 if desk else 440.0
    v = bm.run_mbp_violation_demo(seed=bm.DEFAULT_SEED if seed is None else seed, t_certified=t_cert)
    _write_curve(res, out, "violation_ssp_sifrk22", v.ssp.records)
    _write_curve(res, out, "violation_sifrk22", v.certified.records)
    lo, hi = VIOLATION_WINDOW
    ft = v.ssp_flag_time
    res.add(f"SSP-sIFRK(2,2) exceeds 1 at some t in [{lo:g}, {hi:g}]",
            ft is not None and lo <= ft <= hi, "no flag" if ft is None else f"first flag t={ft:g}")
    m = v.certified.monitor
    res.add(f"sIFRK(2,2) stays <= 1 + 1e-12 through t={t_cert:g}", not m.flagged,
            f"max {m.max_norm:.12f}")
    return res


def threed(out: Path, desk: bool = True, schemes=None, seed: int | None = None) -> SuiteResult:
    """3D cubic Allen-Cahn with sIFRK(2,2), random data, ``tau`` in {0.1, 0.05, 0.01}."""
    res = SuiteResult("threed")
    n, T = (32, 10.0) if desk else (256, 350.0)
    problem = bm.random_cubic_problem(n, 3, 0.01, bm.DEFAULT_SEED if seed is None else seed, kappa=2.0)
    for tau in (0.1, 0.05, 0.01):
        summary = bm.run_with_monitor(get_tableau("sifrk22"), problem, tau, T,
                                      stride=max(1, int(round(0.1 / tau))))
        _write_curve(res, out, f"threed_tau{tau:g}", summary.records)
        _mbp_checks(res, f"tau={tau:g}", summary, 1.0)
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "temporal": temporal,
    "spatial": spatial,
    "mbp": mbp,
    "bubble": bubble,
    "violation": violation,
    "threed": threed,
}


def run_suite(name: str, out, desk: bool = True, schemes=None, seed: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    return SUITES[name](out, desk=desk, schemes=schemes, seed=seed)
