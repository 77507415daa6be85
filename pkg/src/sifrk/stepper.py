"""sIFRK time stepping in Butcher and Shu-Osher form.

Butcher form, for ``i = 1..s``::

    u_i = E(c_i tau) u_0 + tau * sum_j a_ij E((c_i - c_j) tau) N[u_j]

Shu-Osher form::

    u_i = sum_j E((c_i - c_j) tau) (alpha_ij u_j + tau beta_ij N[u_j])

with ``E(t) = exp(t (L - kappa I))`` and ``N = kappa I + f``.  Every stage is
assembled in transform space, so a stage costs one forward transform of
``N[u_j]`` and one inverse transform.
"""

from __future__ import annotations

import logging
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .diagnostics import discrete_energy_array
from .nonlinearity import StabilizedNonlinearity
from .spectral import Field, GridMismatch, OperatorSymbol, sup_norm
from .tableau import ButcherTableau, ShuOsherTableau

log = logging.getLogger(__name__)

GAP_TOL = 1e-15


class NonFiniteError(FloatingPointError):
    def __init__(self, stage: int, step: int | None = None):
        self.stage = stage
        self.step = step
        where = f"step {step}, " if step is not None else ""
        super().__init__(f"non-finite values at {where}stage {stage}")


@dataclass
class StepRecord:
    n: int
    t: float
    sup_norm: float
    energy: float
    stage_sup_norms: list[float] | None = None


class SchemeInstance:
    """A tableau bound to an operator, a nonlinearity and a step size.

    Exponential multipliers are built once for every distinct exponent
    fraction in the tableau; fractions within ``1e-15`` share a table.
    Working storage is ``s + 2`` spectral arrays.
    """

    def __init__(self, tableau: ButcherTableau | ShuOsherTableau, sym: OperatorSymbol,
                 sn: StabilizedNonlinearity, tau: float):
        if not tau > 0:
            raise ValueError("tau must be positive")
        if sym.kappa != sn.kappa:
            raise ValueError(f"operator kappa {sym.kappa} != nonlinearity kappa {sn.kappa}")
        self.tableau = tableau
        self.sym = sym
        self.sn = sn
        self.tau = float(tau)
        self.shu_osher = isinstance(tableau, ShuOsherTableau)
        self._tables: dict[float, np.ndarray] = {}
        s, c = tableau.s, tableau.c

        if self.shu_osher:
            al, be = tableau.alpha, tableau.beta
            self._plan = []
            for i in range(1, s + 1):
                terms = []
                for j in range(i):
                    if al[i, j] != 0.0 or be[i, j] != 0.0:
                        terms.append((j, float(al[i, j]), self.tau * float(be[i, j]),
                                      self._table(c[i] - c[j])))
                self._plan.append(terms)
            self._needs_n = {j for terms in self._plan for j, _, b, _ in terms if b != 0.0}
        else:
            a = tableau.a
            self._plan = []
            for i in range(1, s + 1):
                terms = [(j, self.tau * float(a[i, j]), self._table(c[i] - c[j]))
                         for j in range(i) if a[i, j] != 0.0]
                self._plan.append((self._table(c[i]), terms))
            self._needs_n = {j for _, terms in self._plan for j, _, _ in terms}

    def _table(self, frac: float) -> np.ndarray:
        for key, tab in self._tables.items():
            if abs(key - frac) <= GAP_TOL:
                return tab
        tab = self.sym.multiplier(frac * self.tau)
        tab.setflags(write=False)
        self._tables[float(frac)] = tab
        return tab

    @property
    def fractions(self) -> list[float]:
        return sorted(self._tables)

    @property
    def stages(self) -> int:
        return self.tableau.s

    def step(self, u: np.ndarray, stage_norms: list | None = None,
             step_index: int | None = None) -> np.ndarray:
        """One step on a raw array; optionally append sup norms of stages 1..s."""
        sym, sn = self.sym, self.sn
        fwd, inv = sym.forward, sym.inverse
        s = self.tableau.s
        uh0 = fwd(u)
        nh: dict[int, np.ndarray] = {}
        if 0 in self._needs_n:
            nh[0] = fwd(sn(u))

        if self.shu_osher:
            uh = {0: uh0}
            for i, terms in enumerate(self._plan, start=1):
                acc = 0.0
                for j, al, tb, tab in terms:
                    part = al * uh[j] if al != 0.0 else 0.0
                    if tb != 0.0:
                        part = part + tb * nh[j]
                    acc = acc + tab * part
                ui = inv(acc)
                self._check(ui, i, step_index, stage_norms)
                if i < s:
                    uh[i] = acc
                    if i in self._needs_n:
                        nh[i] = fwd(sn(ui))
            return ui

        for i, (tab_u, terms) in enumerate(self._plan, start=1):
            acc = tab_u * uh0
            for j, ta, tab in terms:
                acc = acc + ta * (tab * nh[j])
            ui = inv(acc)
            self._check(ui, i, step_index, stage_norms)
            if i < s and i in self._needs_n:
                nh[i] = fwd(sn(ui))
        return ui

    @staticmethod
    def _check(ui, i, step_index, stage_norms):
        m = float(np.max(np.abs(ui)))
        if not math.isfinite(m):
            raise NonFiniteError(i, step_index)
        if stage_norms is not None:
            stage_norms.append(m)


def _checked(si: SchemeInstance, u: Field) -> None:
    if si.sym.grid != u.grid:
        raise GridMismatch("field grid does not match scheme grid")
    if not np.all(np.isfinite(u.data)):
        raise NonFiniteError(0)


def step_butcher(si: SchemeInstance, u_n: Field) -> Field:
    if si.shu_osher:
        raise TypeError("scheme holds a Shu-Osher tableau; use step_shu_osher")
    _checked(si, u_n)
    return Field(u_n.grid, si.step(u_n.data))


def step_shu_osher(si: SchemeInstance, u_n: Field) -> Field:
    if not si.shu_osher:
        raise TypeError("scheme holds a Butcher tableau; use step_butcher")
    _checked(si, u_n)
    return Field(u_n.grid, si.step(u_n.data))


def step(si: SchemeInstance, u_n: Field) -> Field:
    _checked(si, u_n)
    return Field(u_n.grid, si.step(u_n.data))


Callback = Callable[[StepRecord, np.ndarray], "bool | None"]
StepHook = Callable[[int, float, np.ndarray], "bool | None"]


@dataclass
class IntegrationResult:
    field: Field
    records: list[StepRecord]
    steps: int
    T: float
    stopped_early: bool = False
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)


def step_count(T: float, tau: float) -> int:
    """``round(T / tau)``, warning when ``T`` is not a multiple of ``tau``."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    n = int(round(T / tau))
    if T > 0 and abs(n * tau - T) > 1e-12 * T:
        warnings.warn(f"T={T:g} is not a multiple of tau={tau:g}; integrating to {n * tau:g}",
                      stacklevel=3)
    return n


def integrate(si: SchemeInstance, u0: Field, T: float, stride: int = 1,
              callbacks: Iterable[Callback] = (), record_stages: bool = False,
              energy: bool = True, step_hook: StepHook | None = None) -> IntegrationResult:
    """Advance ``u0`` to ``T`` with ``round(T / tau)`` steps.

    A record (time, sup norm, energy) is taken at step 0 and every ``stride``
    steps, plus the final step.  Each callback receives the record and the
    current array; a truthy return stops the run.  ``step_hook`` is called on
    every step with ``(n, t, u)`` and may also stop the run.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    _checked(si, u0)
    callbacks = list(callbacks)
    nsteps = step_count(T, si.tau)
    tau = si.tau
    sym, spec = si.sym, si.sn.spec
    records: list[StepRecord] = []
    start = time.perf_counter()

    def record(n, u, stage_norms):
        e = discrete_energy_array(sym, spec, u) if energy else float("nan")
        rec = StepRecord(n, n * tau, sup_norm(u), e, stage_norms)
        records.append(rec)
        return any(bool(cb(rec, u)) for cb in callbacks)

    u = np.array(u0.data, dtype=float, copy=True)
    stop = record(0, u, None)
    if step_hook is not None and not stop:
        stop = bool(step_hook(0, 0.0, u))
    n = 0
    while not stop and n < nsteps:
        stage_norms = [] if record_stages else None
        u = si.step(u, stage_norms, step_index=n + 1)
        n += 1
        if n % stride == 0 or n == nsteps:
            stop = record(n, u, stage_norms)
        if step_hook is not None and bool(step_hook(n, n * tau, u)):
            stop = True
    wall = time.perf_counter() - start
    log.debug("integrated %d steps in %.2fs", n, wall)
    return IntegrationResult(Field(u0.grid, u), records, n, n * tau, n < nsteps, wall)
