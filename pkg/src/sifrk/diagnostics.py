"""Discrete energy, error norms, convergence rates and output formats."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .spectral import Field, GridMismatch, OperatorSymbol


def discrete_energy_array(sym: OperatorSymbol, spec, u: np.ndarray) -> float:
    """``h^d [ -1/2 sum u (L u) + sum F(u) ]`` with the unstabilized stencil."""
    lu = sym.laplacian_array(u)
    return sym.grid.cell_volume * float(-0.5 * np.sum(u * lu) + np.sum(spec.F(u)))


def discrete_energy(sym: OperatorSymbol, spec, u: Field) -> float:
    """Free energy of ``u``; ``sym.kappa`` is ignored, only the diffusion enters."""
    if sym.grid != u.grid:
        raise GridMismatch("field grid does not match operator grid")
    return discrete_energy_array(sym, spec, u.data)


def _pair(u: Field, v: Field) -> np.ndarray:
    if u.grid != v.grid:
        raise GridMismatch("error norms need fields on the same grid")
    return u.data - v.data


def l2_error(u: Field, v: Field) -> float:
    d = _pair(u, v)
    return math.sqrt(u.grid.cell_volume * float(np.sum(d * d)))


def linf_error(u: Field, v: Field) -> float:
    d = _pair(u, v)
    return float(np.max(np.abs(d)))


@dataclass
class ErrorReport:
    l2: float
    linf: float
    tau_or_h: float
    label: str = ""


def error_report(u: Field, ref: Field, resolution: float, label: str = "") -> ErrorReport:
    return ErrorReport(l2_error(u, ref), linf_error(u, ref), resolution, label)


def display_rate(rate: float) -> str:
    """Two decimals, truncated toward zero (reference tables truncate rather than round)."""
    return f"{math.trunc(rate * 100.0) / 100.0:.2f}"


@dataclass
class RateRow:
    resolution: float
    l2: float
    l2_rate: float | None
    linf: float
    linf_rate: float | None


@dataclass
class RateTable:
    rows: list[RateRow] = field(default_factory=list)
    label: str = ""

    def finest_rate(self, norm: str = "l2", pair: int = 1) -> float:
        """Rate of the ``pair``-th finest pair (1 = the finest)."""
        return getattr(self.rows[-pair], f"{norm}_rate")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("resolution,l2,l2_rate,linf,linf_rate\n")
        for r in self.rows:
            l2r = "" if r.l2_rate is None else f"{r.l2_rate:.12e}"
            lir = "" if r.linf_rate is None else f"{r.linf_rate:.12e}"
            buf.write(f"{r.resolution:.12e},{r.l2:.12e},{l2r},{r.linf:.12e},{lir}\n")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv())

    def format(self) -> str:
        lines = [f"{self.label}" if self.label else "",
                 f"{'resolution':>14} {'L2 error':>12} {'rate':>6} {'Linf error':>12} {'rate':>6}"]
        for r in self.rows:
            l2r = "--" if r.l2_rate is None else display_rate(r.l2_rate)
            lir = "--" if r.linf_rate is None else display_rate(r.linf_rate)
            lines.append(f"{r.resolution:14.6e} {r.l2:12.4e} {l2r:>6} {r.linf:12.4e} {lir:>6}")
        return "\n".join(line for line in lines if line)


def _rates(errs: list[float]) -> list[float | None]:
    out: list[float | None] = [None]
    for prev, cur in zip(errs, errs[1:]):
        out.append(math.log2(prev / cur))
    return out


def convergence_rates(errors, label: str = "") -> RateTable:
    """Rates ``log2(e_{i-1} / e_i)`` over successive halvings.

    ``errors`` holds ``(resolution, l2, linf)`` triples, ``ErrorReport`` objects,
    or ``(resolution, error)`` pairs (used for both norms).
    """
    res, l2, li = [], [], []
    for e in errors:
        if isinstance(e, ErrorReport):
            r, a, b = e.tau_or_h, e.l2, e.linf
        elif len(e) == 2:
            r, a = e
            b = a
        else:
            r, a, b = e
        if not (a > 0 and b > 0):
            raise ValueError("errors must be positive to take rates")
        res.append(float(r))
        l2.append(float(a))
        li.append(float(b))
    if any(r1 >= r0 for r0, r1 in zip(res, res[1:])):
        raise ValueError("resolutions must decrease monotonically")
    rows = [RateRow(r, a, ar, b, br) for r, a, ar, b, br in zip(res, l2, _rates(l2), li, _rates(li))]
    return RateTable(rows, label)


class MBPMonitor:
    """Record callback that flags the first step whose sup norm exceeds ``gamma + tolerance``."""

    def __init__(self, gamma: float, tolerance: float = 1e-12, stop_on_flag: bool = False):
        if not gamma > 0:
            raise ValueError("gamma must be positive")
        self.gamma = gamma
        self.tolerance = tolerance
        self.stop_on_flag = stop_on_flag
        self.flag_step: int | None = None
        self.flag_time: float | None = None
        self.max_norm = 0.0

    @property
    def flagged(self) -> bool:
        return self.flag_step is not None

    def __call__(self, record, u=None) -> bool:
        norms = [record.sup_norm] + list(record.stage_sup_norms or [])
        m = max(norms)
        self.max_norm = max(self.max_norm, m)
        if self.flag_step is None and m > self.gamma + self.tolerance:
            self.flag_step = record.n
            self.flag_time = record.t
        return self.stop_on_flag and self.flagged

    def observe(self, n: int, t: float, u: np.ndarray) -> bool:
        """Per-step check of the solution array; usable as an ``integrate`` step hook."""
        m = float(np.max(np.abs(u)))
        self.max_norm = max(self.max_norm, m)
        if self.flag_step is None and m > self.gamma + self.tolerance:
            self.flag_step = n
            self.flag_time = t
        return self.stop_on_flag and self.flagged


def mbp_monitor(gamma: float, tolerance: float = 1e-12, stop_on_flag: bool = False) -> MBPMonitor:
    return MBPMonitor(gamma, tolerance, stop_on_flag)


CURVE_HEADER = "step,t,sup_norm,energy\n"


def curve_csv(records) -> str:
    lines = [CURVE_HEADER]
    for r in records:
        lines.append(f"{r.n},{r.t:.12e},{r.sup_norm:.12e},{r.energy:.12e}\n")
    return "".join(lines)


def write_curve(path, records) -> None:
    Path(path).write_text(curve_csv(records))
