"""Problem definitions and experiment harnesses for the Allen-Cahn tests.

All problems live on ``(-0.5, 0.5)^d``.  Desk-scale settings shrink the grid by a
factor of four relative to the reference runs (``h = 1/512`` instead of
``1/2048`` for the convergence tests, ``1/256`` instead of ``1/1024`` for the
bubble and Flory-Huggins runs).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import rng
from .diagnostics import (MBPMonitor, RateTable, convergence_rates, l2_error, linf_error)
from .nonlinearity import NonlinearSpec, StabilizedNonlinearity, cubic, flory_huggins
from .spectral import BC, Field, Grid, OperatorSymbol
from .stepper import IntegrationResult, SchemeInstance, integrate
from .tableau import ButcherTableau, ShuOsherTableau, get_tableau

log = logging.getLogger(__name__)

Tableau = ButcherTableau | ShuOsherTableau

DEFAULT_SEED = 20210101
TW_EPS = 0.015


# --------------------------------------------------------------------------
# initial data and references
# --------------------------------------------------------------------------


def traveling_wave_speed(eps: float) -> float:
    return 3.0 / (math.sqrt(2.0) * eps)


def traveling_wave_exact(eps: float, t: float, x):
    """``1/2 (1 - tanh((x - s t) / (2 sqrt(2) eps)))`` with ``s = 3 / (sqrt(2) eps)``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    s = traveling_wave_speed(eps)
    return 0.5 * (1.0 - np.tanh((np.asarray(x, dtype=float) - s * t) / (2.0 * math.sqrt(2.0) * eps)))


def traveling_wave_end_time(eps: float = TW_EPS) -> float:
    return math.sqrt(2.0) * eps / 4.0


def bubble_initial(grid: Grid, radius: float = 0.25) -> Field:
    """``+1`` inside the disc (ball) of ``radius`` at the origin, ``-1`` outside."""
    r2 = sum(x**2 for x in grid.coords())
    return Field(grid, np.where(r2 <= radius**2, 1.0, -1.0))


def random_initial(grid: Grid, low: float = -0.9, high: float = 0.9,
                   seed: int = DEFAULT_SEED) -> Field:
    return Field(grid, rng.uniform(seed, grid.shape, low, high))


@dataclass(frozen=True)
class TravelingWave:
    eps: float = TW_EPS

    def __call__(self, grid: Grid) -> Field:
        return Field(grid, traveling_wave_exact(self.eps, 0.0, grid.coords()[0]))

    def exact(self, grid: Grid, t: float) -> Field:
        return Field(grid, traveling_wave_exact(self.eps, t, grid.coords()[0]))


@dataclass(frozen=True)
class Bubble:
    radius: float = 0.25

    def __call__(self, grid: Grid) -> Field:
        return bubble_initial(grid, self.radius)


@dataclass(frozen=True)
class Random:
    low: float = -0.9
    high: float = 0.9
    seed: int = DEFAULT_SEED

    def __call__(self, grid: Grid) -> Field:
        return random_initial(grid, self.low, self.high, self.seed)


@dataclass
class ProblemDef:
    grid: Grid
    diffusivity: float
    spec: NonlinearSpec
    kappa: float | str
    initial: Callable[[Grid], Field]
    name: str = ""

    @property
    def has_exact(self) -> bool:
        return isinstance(self.initial, TravelingWave)

    def exact(self, t: float) -> Field:
        if not self.has_exact:
            raise ValueError(f"problem {self.name!r} has no exact solution")
        return self.initial.exact(self.grid, t)

    def nonlinearity(self) -> StabilizedNonlinearity:
        return StabilizedNonlinearity(self.spec, self.kappa)

    def scheme(self, tableau: Tableau, tau: float) -> SchemeInstance:
        sn = self.nonlinearity()
        sym = OperatorSymbol(self.grid, self.diffusivity, sn.kappa)
        return SchemeInstance(tableau, sym, sn, tau)

    def u0(self) -> Field:
        return self.initial(self.grid)


def traveling_wave_problem(n: int, dim: int = 2, eps: float = TW_EPS) -> ProblemDef:
    """Scaled cubic reaction ``(u - u^3)/eps^2``, unit diffusion, ``kappa = 2/eps^2``, periodic."""
    return ProblemDef(Grid.uniform(dim, n, bc=BC.PERIODIC), 1.0, cubic(eps**2), 2.0 / eps**2,
                      TravelingWave(eps), f"traveling_wave(n={n},d={dim})")


def random_cubic_problem(n: int, dim: int = 2, eps: float = 0.01, seed: int = DEFAULT_SEED,
                         kappa: float | str = 2.0) -> ProblemDef:
    return ProblemDef(Grid.uniform(dim, n, bc=BC.PERIODIC), eps**2, cubic(1.0), kappa,
                      Random(-0.9, 0.9, seed), f"random_cubic(n={n},d={dim})")


def flory_huggins_problem(n: int, dim: int = 2, eps: float = 0.01, seed: int = DEFAULT_SEED,
                          kappa: float | str = 8.02) -> ProblemDef:
    return ProblemDef(Grid.uniform(dim, n, bc=BC.PERIODIC), eps**2, flory_huggins(0.8, 1.6),
                      kappa, Random(-0.9, 0.9, seed), f"flory_huggins(n={n},d={dim})")


def bubble_problem(n: int, eps: float = 0.01, radius: float = 0.25) -> ProblemDef:
    return ProblemDef(Grid.uniform(2, n, bc=BC.NEUMANN), eps**2, cubic(1.0), 2.0,
                      Bubble(radius), f"bubble(n={n})")


# --------------------------------------------------------------------------
# convergence
# --------------------------------------------------------------------------

# coarsest step as a fraction of T, as in the reference tables
TEMPORAL_DELTA = {"sifrk11": 128, "sifrk22": 32, "sifrk32": 32, "sifrk42": 32, "heun33": 16}
EXPECTED_ORDER = {"sifrk11": 1, "sifrk22": 2, "sifrk32": 2, "sifrk42": 2, "heun33": 3}


def temporal_tau_list(scheme: str, T: float, levels: int = 6) -> list[float]:
    d = TEMPORAL_DELTA[scheme]
    return [T / (d * 2**k) for k in range(levels)]


def run_temporal_convergence(tableau: Tableau, problem: ProblemDef, tau_list, T: float | None = None,
                             label: str = "") -> RateTable:
    """Integrate to ``T`` for each step size and tabulate errors against the exact profile."""
    if not problem.has_exact:
        raise ValueError("temporal convergence needs a problem with an exact solution")
    if T is None:
        T = traveling_wave_end_time(problem.initial.eps)
    u0, ref = problem.u0(), problem.exact(T)
    rows = []
    for tau in tau_list:
        res = integrate(problem.scheme(tableau, tau), u0, T, stride=10**12, energy=False)
        rows.append((tau, l2_error(res.field, ref), linf_error(res.field, ref)))
        log.info("%s tau=%.4e l2=%.4e", label or tableau.name, tau, rows[-1][1])
    return convergence_rates(rows, label or tableau.name)


def run_spatial_convergence(tableau: Tableau, make_problem: Callable[[int], ProblemDef], n_list,
                            tau: float, T: float | None = None, label: str = "") -> RateTable:
    """Vary the grid at fixed ``tau``; errors against the exact profile at ``T``."""
    rows = []
    for n in n_list:
        problem = make_problem(n)
        if T is None:
            T = traveling_wave_end_time(problem.initial.eps)
        res = integrate(problem.scheme(tableau, tau), problem.u0(), T, stride=10**12, energy=False)
        ref = problem.exact(T)
        h = problem.grid.h[0]
        rows.append((h, l2_error(res.field, ref), linf_error(res.field, ref)))
    return convergence_rates(rows, label or f"{tableau.name} space")


def run_spatial_self_convergence(tableau: Tableau, make_problem: Callable[[int], ProblemDef],
                                 n_list, tau: float, T: float, refine: int = 4,
                                 label: str = "") -> RateTable:
    """Spatial errors against a ``refine``-times finer periodic-grid solution at the same ``tau``.

    Fine nodes ``a + k h/refine`` include every coarse node, so the comparison is
    by injection.  Measures the discretization error of the semi-discrete system
    without relying on the approximate traveling-wave formula.
    """
    n_fine = max(n_list) * refine
    fine_p = make_problem(n_fine)
    fine = integrate(fine_p.scheme(tableau, tau), fine_p.u0(), T, stride=10**12, energy=False).field
    rows = []
    for n in n_list:
        p = make_problem(n)
        if p.grid.bc is not BC.PERIODIC:
            raise ValueError("self-convergence by injection needs node-centered periodic grids")
        res = integrate(p.scheme(tableau, tau), p.u0(), T, stride=10**12, energy=False)
        step = n_fine // n
        sl = tuple(slice(None, None, step) for _ in range(p.grid.dim))
        ref = Field(p.grid, fine.data[sl])
        rows.append((p.grid.h[0], l2_error(res.field, ref), linf_error(res.field, ref)))
    return convergence_rates(rows, label or f"{tableau.name} space (self)")


# --------------------------------------------------------------------------
# MBP experiments
# --------------------------------------------------------------------------


@dataclass
class RunSummary:
    scheme: str
    result: IntegrationResult
    monitor: MBPMonitor

    @property
    def records(self):
        return self.result.records


def run_with_monitor(tableau: Tableau, problem: ProblemDef, tau: float, T: float, stride: int = 1,
                     tolerance: float = 1e-12, stop_on_flag: bool = False,
                     record_stages: bool = False, energy: bool = True,
                     step_hook=None) -> RunSummary:
    mon = MBPMonitor(problem.spec.gamma, tolerance, stop_on_flag)

    def hook(n, t, u):
        stop = mon.observe(n, t, u)
        if step_hook is not None:
            stop = bool(step_hook(n, t, u)) or stop
        return stop

    res = integrate(problem.scheme(tableau, tau), problem.u0(), T, stride=stride, callbacks=[mon],
                    record_stages=record_stages, energy=energy, step_hook=hook)
    return RunSummary(tableau.name, res, mon)


@dataclass
class ViolationResult:
    ssp_flag_time: float | None
    ssp: RunSummary
    certified: RunSummary

    @property
    def certified_flagged(self) -> bool:
        return self.certified.monitor.flagged


def run_mbp_violation_demo(n: int = 256, tau: float = 0.1, seed: int = DEFAULT_SEED,
                           t_ssp: float = 20.0, t_certified: float = 440.0,
                           stride: int = 1) -> ViolationResult:
    """SSP-sIFRK(2,2) vs sIFRK(2,2) on the same random data, cubic, ``eps = 0.01``, ``kappa = 2``.

    The SSP run stops at its first flag (or ``t_ssp``).  The monitor flags
    whenever the sup norm exceeds ``1 + 1e-12``.
    """
    problem = random_cubic_problem(n, 2, 0.01, seed, kappa=2.0)
    ssp = run_with_monitor(get_tableau("ssp-sifrk22"), problem, tau, t_ssp, stride, stop_on_flag=True)
    cert = run_with_monitor(get_tableau("sifrk22"), problem, tau, t_certified, stride)
    return ViolationResult(ssp.monitor.flag_time, ssp, cert)


def slice_radius(u: Field) -> float:
    """Largest ``|x|`` of the ``u > 0`` region on the row nearest ``y = 0``.

    The zero crossing is located by linear interpolation between neighbours;
    returns 0 once the row has no positive value.
    """
    x, y = u.grid.axes()
    row = u.data[:, int(np.argmin(np.abs(y)))]
    pos = np.nonzero(row > 0)[0]
    if pos.size == 0:
        return 0.0
    best = 0.0
    for k in (pos[0], pos[-1]):
        nb = k - 1 if k == pos[0] else k + 1
        if 0 <= nb < row.size and row[nb] <= 0:
            frac = row[k] / (row[k] - row[nb])
            xc = x[k] + frac * (x[nb] - x[k])
        else:
            xc = x[k]
        best = max(best, abs(xc))
    return best


@dataclass
class BubbleResult:
    radii: dict[float, float]
    vanish_time: float | None
    summary: RunSummary
    snapshots: dict[float, Field] = field(default_factory=dict)


def run_bubble(n: int = 256, tau: float = 0.01, t_end: float = 330.0,
               snapshot_times=(50, 100, 150, 200, 250, 300), stride: int = 100,
               keep_snapshots: bool = False) -> BubbleResult:
    """Shrinking bubble with sIFRK(2,2), Neumann BC.  Stops once the bubble is gone."""
    problem = bubble_problem(n)
    steps = {int(round(t / tau)): float(t) for t in snapshot_times}
    radii: dict[float, float] = {}
    snaps: dict[float, Field] = {}
    vanish: list[float] = []

    def hook(k, t, u):
        if k in steps:
            f = Field(problem.grid, u.copy())
            radii[steps[k]] = slice_radius(f)
            if keep_snapshots:
                snaps[steps[k]] = f
        if not vanish and u.max() <= 0.0:
            vanish.append(t)
        return bool(vanish) and k >= max(steps, default=0)

    summary = run_with_monitor(get_tableau("sifrk22"), problem, tau, t_end, stride, step_hook=hook)
    return BubbleResult(radii, vanish[0] if vanish else None, summary, snaps)


def energy_nonincreasing(records, rel_slack: float = 1e-8) -> tuple[bool, int | None]:
    """True if every recorded energy is at most the previous one plus ``rel_slack * |E_prev|``."""
    for a, b in zip(records, records[1:]):
        if b.energy > a.energy + rel_slack * abs(a.energy):
            return False, b.n
    return True, None
