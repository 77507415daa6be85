"""Explicit Runge-Kutta tableaus for stabilized integrating-factor schemes.

Indexing follows the stage convention used throughout the package: stage 0 is
the current solution ``u^n`` and stage ``s`` is ``u^{n+1}``.  A tableau with
``s`` stages therefore stores an ``(s+1) x (s+1)`` strictly lower-triangular
coefficient matrix whose row ``i`` holds the weights of stages ``0..i-1``, and
``s+1`` abscissas with ``c[0] == 0`` and ``c[s] == 1``.

The certification routines check sufficient conditions for unconditional
preservation of the maximum bound of the solution:

* Butcher form: nondecreasing abscissas, and every stage function
  ``g_i(x) = exp(-c_i x) + x * sum_j a_ij exp(-(c_i - c_j) x)`` nonincreasing
  on ``[0, inf)``.
* Shu-Osher form: convex ``alpha`` rows, nonnegative ``beta`` supported on the
  support of ``alpha``, nondecreasing abscissas, and
  ``beta_ij / alpha_ij <= c_i - c_j``.

A Refuted verdict means a sufficient condition fails; it does not prove that
the scheme violates the bound.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

ALGEBRAIC_TOL = 1e-14
MONOTONE_TOL = 1e-12
ROUNDTRIP_TOL = 1e-13


class TableauError(ValueError):
    """Structurally invalid tableau or unparsable tableau file."""


class Verdict(enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class StageCheck:
    """One checked condition.

    ``stage`` is the row index ``i`` (0 for whole-tableau conditions).
    ``witness`` is the sample point ``x`` where ``g_i'(x) > 0`` for the
    monotonicity check, or the offending ``(i, j)`` pair for coefficient
    conditions.
    """

    stage: int
    condition: str
    passed: bool
    witness: float | tuple[int, int] | None = None
    detail: str = ""


@dataclass
class CertificationReport:
    verdict: Verdict
    checks: list[StageCheck] = field(default_factory=list)
    notes: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    @property
    def failures(self) -> list[StageCheck]:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> StageCheck | None:
        fails = self.failures
        return fails[0] if fails else None

    def format(self, name: str = "") -> str:
        lines = [f"{name + ': ' if name else ''}{self.verdict}"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            w = ""
            if c.witness is not None:
                if isinstance(c.witness, tuple):
                    w = f" witness=({c.witness[0]},{c.witness[1]})"
                else:
                    w = f" witness x={c.witness:.6g}"
            d = f" [{c.detail}]" if c.detail else ""
            lines.append(f"  {mark} stage {c.stage}: {c.condition}{w}{d}")
        if self.notes:
            lines.append(f"  note: {self.notes}")
        return "\n".join(lines)


def _lower_triangular(rows, s: int, what: str) -> np.ndarray:
    """Pack ragged rows (row i has i entries, i = 1..s) or a square array."""
    m = np.zeros((s + 1, s + 1))
    arr = None
    try:
        arr = np.asarray(rows, dtype=float)
    except ValueError:
        pass
    if arr is not None and arr.ndim == 2 and arr.shape == (s + 1, s + 1):
        if np.any(np.triu(arr) != 0.0):
            raise TableauError(f"{what} must be strictly lower triangular")
        m[:] = arr
        return m
    rows = list(rows)
    if len(rows) != s:
        raise TableauError(f"{what} needs {s} rows, got {len(rows)}")
    for i, row in enumerate(rows, start=1):
        row = [float(v) for v in row]
        if len(row) != i:
            raise TableauError(f"{what} row {i} needs {i} entries, got {len(row)}")
        m[i, :i] = row
    return m


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    """Butcher form: ``a`` is ``(s+1, s+1)`` strictly lower triangular, ``c`` has ``s+1`` entries.

    ``a`` may be given as ragged rows ``[[a10], [a20, a21], ...]``.  If ``c`` is
    omitted it is taken as the row sums.
    """

    a: np.ndarray
    c: np.ndarray | None = None
    name: str = ""
    order: int | None = None

    def __post_init__(self):
        a = self.a
        s = _stage_count(a)
        a = _lower_triangular(a, s, "a")
        c = a.sum(axis=1) if self.c is None else np.asarray(self.c, dtype=float)
        if c.shape != (s + 1,):
            raise TableauError(f"c needs {s + 1} entries, got {c.size}")
        object.__setattr__(self, "a", _freeze(a))
        object.__setattr__(self, "c", _freeze(c))

    @property
    def s(self) -> int:
        return self.a.shape[0] - 1

    def row(self, i: int) -> np.ndarray:
        return self.a[i, :i]

    def gaps(self) -> set[float]:
        """Distinct exponent fractions ``c_i`` and ``c_i - c_j`` used by the scheme."""
        out = {float(ci) for ci in self.c[1:]}
        for i in range(1, self.s + 1):
            for j in range(i):
                if self.a[i, j] != 0.0:
                    out.add(float(self.c[i] - self.c[j]))
        return out


@dataclass(frozen=True, eq=False)
class ShuOsherTableau:
    """Shu-Osher form with convex weights ``alpha`` and step weights ``beta``."""

    alpha: np.ndarray
    beta: np.ndarray
    c: np.ndarray
    name: str = ""
    order: int | None = None

    def __post_init__(self):
        s = _stage_count(self.alpha)
        alpha = _lower_triangular(self.alpha, s, "alpha")
        beta = _lower_triangular(self.beta, s, "beta")
        c = np.asarray(self.c, dtype=float)
        if c.shape != (s + 1,):
            raise TableauError(f"c needs {s + 1} entries, got {c.size}")
        object.__setattr__(self, "alpha", _freeze(alpha))
        object.__setattr__(self, "beta", _freeze(beta))
        object.__setattr__(self, "c", _freeze(c))

    @property
    def s(self) -> int:
        return self.alpha.shape[0] - 1

    def gaps(self) -> set[float]:
        out = set()
        for i in range(1, self.s + 1):
            for j in range(i):
                if self.alpha[i, j] != 0.0 or self.beta[i, j] != 0.0:
                    out.add(float(self.c[i] - self.c[j]))
        return out


def _stage_count(rows) -> int:
    try:
        arr = np.asarray(rows, dtype=float)
        if arr.ndim == 2 and arr.shape[0] == arr.shape[1] and arr.shape[0] >= 2:
            return arr.shape[0] - 1
    except ValueError:
        pass
    n = len(rows)
    if n < 1:
        raise TableauError("tableau needs at least one stage")
    return n


# --------------------------------------------------------------------------
# Butcher-form checks
# --------------------------------------------------------------------------


def validate_butcher(t: ButcherTableau) -> CertificationReport:
    """Algebraic conditions: nonnegativity, row sums, ``c_s = 1``, monotone abscissas."""
    s, a, c = t.s, t.a, t.c
    checks = []

    neg = [(i, j) for i in range(1, s + 1) for j in range(i) if a[i, j] < -ALGEBRAIC_TOL]
    checks.append(StageCheck(0, "a_ij >= 0", not neg, neg[0] if neg else None))

    bad_rows = [i for i in range(1, s + 1) if abs(c[i] - a[i, :i].sum()) > ALGEBRAIC_TOL]
    ok = abs(c[0]) <= ALGEBRAIC_TOL and not bad_rows
    detail = "" if ok else ("c_0 != 0" if abs(c[0]) > ALGEBRAIC_TOL else f"row {bad_rows[0]}")
    checks.append(StageCheck(0, "c_0 = 0 and c_i = sum_j a_ij", ok, detail=detail))

    checks.append(StageCheck(0, "c_s = 1", abs(c[s] - 1.0) <= ALGEBRAIC_TOL))

    drops = [i for i in range(1, s + 1) if c[i] < c[i - 1] - ALGEBRAIC_TOL]
    checks.append(
        StageCheck(0, "abscissas nondecreasing", not drops,
                   detail=f"c_{drops[0]} < c_{drops[0] - 1}" if drops else "")
    )
    verdict = Verdict.CERTIFIED if all(ch.passed for ch in checks) else Verdict.REFUTED
    return CertificationReport(verdict, checks)


def _check_stage(t: ButcherTableau, i: int) -> None:
    if not 1 <= i <= t.s:
        raise IndexError(f"stage index {i} outside 1..{t.s}")


def g_function(t: ButcherTableau, i: int, x):
    """``g_i(x) = exp(-c_i x) + x * sum_{j<i} a_ij exp(-(c_i - c_j) x)``; vectorized in ``x``."""
    _check_stage(t, i)
    x = np.asarray(x, dtype=float)
    ci = t.c[i]
    total = np.exp(-ci * x)
    acc = np.zeros_like(total)
    for j in range(i):
        aij = t.a[i, j]
        if aij != 0.0:
            acc = acc + aij * np.exp(-(ci - t.c[j]) * x)
    out = total + x * acc
    return float(out) if out.ndim == 0 else out


def g_derivative(t: ButcherTableau, i: int, x):
    """Closed-form ``g_i'(x)``."""
    _check_stage(t, i)
    x = np.asarray(x, dtype=float)
    ci = t.c[i]
    out = -ci * np.exp(-ci * x)
    for j in range(i):
        aij = t.a[i, j]
        if aij != 0.0:
            gap = ci - t.c[j]
            out = out + aij * (1.0 - gap * x) * np.exp(-gap * x)
    return float(out) if out.ndim == 0 else out


def certify_mbp_butcher(
    t: ButcherTableau, x_max: float = 100.0, n_samples: int = 100_000
) -> CertificationReport:
    """Check that every ``g_i`` is nonincreasing on ``[0, inf)``.

    ``g_i'`` is sampled on ``n_samples`` uniform points of ``[0, x_max]``.  Beyond
    ``x_max`` the sign is settled analytically: a term with positive gap
    ``c_i - c_j`` is negative once ``x > 1/(c_i - c_j)``, while a term with zero
    gap contributes the constant ``a_ij`` so that ``g_i'`` tends to a positive
    limit.
    """
    if x_max <= 0 or n_samples < 2:
        raise ValueError("need x_max > 0 and n_samples >= 2")
    base = validate_butcher(t)
    if not base.certified:
        return base

    checks = list(base.checks)
    xs = np.linspace(0.0, x_max, n_samples)
    inconclusive = []
    for i in range(1, t.s + 1):
        d = g_derivative(t, i, xs)
        k = int(np.argmax(d))
        if d[k] > MONOTONE_TOL:
            checks.append(StageCheck(i, "g_i nonincreasing", False, float(xs[k]),
                                     f"g_{i}'={d[k]:.3e}"))
            continue

        ci = t.c[i]
        row = t.a[i, :i]
        gaps = ci - t.c[:i]
        flat = row[(np.abs(gaps) <= ALGEBRAIC_TOL) & (row > 0.0)].sum()
        if flat > 0.0:
            # constant positive contribution dominates eventually
            x = x_max
            while g_derivative(t, i, x) <= MONOTONE_TOL and x < 1e300:
                x *= 2.0
            checks.append(StageCheck(i, "g_i nonincreasing", False, float(x),
                                     f"zero-gap weight {flat:.6g} makes lim g_{i}' > 0"))
            continue

        pos = gaps[(gaps > ALGEBRAIC_TOL) & (row > 0.0)]
        need = float(1.0 / pos.min()) if pos.size else 0.0
        if need >= x_max:
            inconclusive.append(i)
            checks.append(StageCheck(i, "g_i nonincreasing", True,
                                     detail=f"tail unresolved: need x_max > {need:.6g}"))
        else:
            checks.append(StageCheck(i, "g_i nonincreasing", True))

    if any(not ch.passed for ch in checks):
        verdict = Verdict.REFUTED
    elif inconclusive:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.CERTIFIED
    notes = f"sampled [0, {x_max:g}] with {n_samples} points"
    return CertificationReport(verdict, checks, notes)


# --------------------------------------------------------------------------
# Shu-Osher form
# --------------------------------------------------------------------------


def butcher_to_shu_osher(t: ButcherTableau, alpha, name: str | None = None) -> ShuOsherTableau:
    """``beta_ij = a_ij - sum_{k=j+1}^{i-1} alpha_ik a_kj`` for a given ``alpha``."""
    s = t.s
    try:
        al = _lower_triangular(alpha, s, "alpha")
    except TableauError as exc:
        raise TableauError(f"alpha does not match a {s}-stage tableau: {exc}") from None
    a = t.a
    beta = np.zeros_like(a)
    for i in range(1, s + 1):
        for j in range(i):
            beta[i, j] = a[i, j] - sum(al[i, k] * a[k, j] for k in range(j + 1, i))
    return ShuOsherTableau(al, beta, t.c.copy(), name if name is not None else t.name, t.order)


def shu_osher_to_butcher(t: ShuOsherTableau, name: str | None = None) -> ButcherTableau:
    s = t.s
    al, be = t.alpha, t.beta
    a = np.zeros_like(al)
    for i in range(1, s + 1):
        for j in range(i):
            a[i, j] = be[i, j] + sum(al[i, k] * a[k, j] for k in range(j + 1, i))
    return ButcherTableau(a, t.c.copy(), name if name is not None else t.name, t.order)


def certify_mbp_shu_osher(t: ShuOsherTableau) -> CertificationReport:
    s, al, be, c = t.s, t.alpha, t.beta, t.c
    checks = []
    pairs = [(i, j) for i in range(1, s + 1) for j in range(i)]

    neg = [p for p in pairs if al[p] < -ALGEBRAIC_TOL]
    rows = [i for i in range(1, s + 1) if abs(al[i, :i].sum() - 1.0) > ALGEBRAIC_TOL]
    checks.append(StageCheck(0, "alpha_ij >= 0 and sum_j alpha_ij = 1", not neg and not rows,
                             neg[0] if neg else None,
                             f"row {rows[0]} sums to {al[rows[0], :rows[0]].sum():.6g}" if rows else ""))

    bad = [p for p in pairs
           if be[p] < -ALGEBRAIC_TOL or (al[p] <= ALGEBRAIC_TOL and abs(be[p]) > ALGEBRAIC_TOL)]
    checks.append(StageCheck(0, "beta_ij >= 0, beta_ij = 0 where alpha_ij = 0", not bad,
                             bad[0] if bad else None))

    drops = [i for i in range(1, s + 1) if c[i] < c[i - 1] - ALGEBRAIC_TOL]
    ok = abs(c[0]) <= ALGEBRAIC_TOL and abs(c[s] - 1.0) <= ALGEBRAIC_TOL and not drops
    checks.append(StageCheck(0, "0 = c_0 <= ... <= c_s = 1", ok))

    for i, j in pairs:
        if al[i, j] > ALGEBRAIC_TOL:
            ratio = be[i, j] / al[i, j]
            gap = c[i] - c[j]
            if ratio > gap + ALGEBRAIC_TOL:
                checks.append(StageCheck(i, "beta_ij/alpha_ij <= c_i - c_j", False, (i, j),
                                         f"{ratio:.6g} > {gap:.6g}"))
    if all(ch.passed for ch in checks):
        checks.append(StageCheck(0, "beta_ij/alpha_ij <= c_i - c_j", True))

    verdict = Verdict.CERTIFIED if all(ch.passed for ch in checks) else Verdict.REFUTED
    return CertificationReport(verdict, checks)


def certify(t: ButcherTableau | ShuOsherTableau, **kw) -> CertificationReport:
    """Dispatch on the tableau form."""
    if isinstance(t, ShuOsherTableau):
        return certify_mbp_shu_osher(t)
    return certify_mbp_butcher(t, **kw)


def as_butcher(t: ButcherTableau | ShuOsherTableau) -> ButcherTableau:
    return shu_osher_to_butcher(t) if isinstance(t, ShuOsherTableau) else t


# --------------------------------------------------------------------------
# Built-in schemes
# --------------------------------------------------------------------------


def sifrk11() -> ButcherTableau:
    return ButcherTableau([[1.0]], [0.0, 1.0], "sIFRK(1,1)", 1)


def sifrk_s2(s: int) -> ButcherTableau:
    """Second-order family with ``c = [0, 1/s, ..., 1]``."""
    if s < 2:
        raise ValueError("sIFRK(s,2) needs s >= 2")
    rows = [[1.0 / s] * i for i in range(1, s)]
    rows.append([0.0] + [1.0 / (s - 1)] * (s - 1))
    c = [i / s for i in range(s + 1)]
    return ButcherTableau(rows, c, f"sIFRK({s},2)", 2)


def heun33() -> ButcherTableau:
    rows = [[1 / 3], [0.0, 2 / 3], [1 / 4, 0.0, 3 / 4]]
    return ButcherTableau(rows, [0.0, 1 / 3, 2 / 3, 1.0], "Heun-sIFRK(3,3)", 3)


def ssp_sifrk_s2(s: int) -> ShuOsherTableau:
    """SSP second-order family in canonical Shu-Osher form, ``c = [0, 1/(s-1), ..., 1, 1]``."""
    if s < 2:
        raise ValueError("SSP-sIFRK(s,2) needs s >= 2")
    alpha = np.zeros((s + 1, s + 1))
    beta = np.zeros((s + 1, s + 1))
    for i in range(1, s):
        alpha[i, i - 1] = 1.0
        beta[i, i - 1] = 1.0 / (s - 1)
    alpha[s, 0] = 1.0 / s
    alpha[s, s - 1] = (s - 1) / s
    beta[s, s - 1] = 1.0 / s
    c = [i / (s - 1) for i in range(s)] + [1.0]
    return ShuOsherTableau(alpha, beta, c, f"SSP-sIFRK({s},2)", 2)


def ssp_sifrk33() -> ShuOsherTableau:
    alpha = [[1.0], [2 / 3, 1 / 3], [37 / 64, 0.0, 27 / 64]]
    beta = [[2 / 3], [0.0, 4 / 9], [5 / 32, 0.0, 9 / 16]]
    return ShuOsherTableau(alpha, beta, [0.0, 2 / 3, 2 / 3, 1.0], "SSP-sIFRK(3,3)", 3)


_BUILTINS = {
    "sifrk11": sifrk11,
    "sifrk22": lambda: sifrk_s2(2),
    "sifrk32": lambda: sifrk_s2(3),
    "sifrk42": lambda: sifrk_s2(4),
    "heun33": heun33,
    "ssp-sifrk22": lambda: ssp_sifrk_s2(2),
    "ssp-sifrk32": lambda: ssp_sifrk_s2(3),
    "ssp-sifrk42": lambda: ssp_sifrk_s2(4),
    "ssp-sifrk33": ssp_sifrk33,
}


def builtin_tableaus() -> dict[str, ButcherTableau | ShuOsherTableau]:
    """All shipped schemes keyed by their short name (``sifrk22``, ``ssp-sifrk33``, ...)."""
    return {k: f() for k, f in _BUILTINS.items()}


def builtin_names() -> list[str]:
    return list(_BUILTINS)


def get_tableau(name: str) -> ButcherTableau | ShuOsherTableau:
    """Resolve a builtin name or a path to a tableau file."""
    key = name.strip().lower()
    if key in _BUILTINS:
        return _BUILTINS[key]()
    p = Path(name)
    if p.exists():
        return load_tableau(p)
    raise TableauError(f"unknown scheme {name!r}; builtins: {', '.join(_BUILTINS)}")


# --------------------------------------------------------------------------
# Plain-text tableau files
# --------------------------------------------------------------------------


def _real(tok: str, lineno: int) -> float:
    try:
        return float(Fraction(tok)) if "/" in tok else float(tok)
    except (ValueError, ZeroDivisionError):
        raise TableauError(f"line {lineno}: cannot parse number {tok!r}") from None


def parse_tableau(text: str, name: str = "") -> ButcherTableau | ShuOsherTableau:
    """Parse the plain-text format.

    ::

        # comment
        s 2
        c 0 1/2 1
        a 1 1/2
        a 2 0 1

    The Shu-Osher variant replaces ``a`` rows with ``alpha`` and ``beta`` rows.
    Optional ``name <text>`` and ``order <int>`` lines set metadata.  Numbers may
    be written as fractions ``p/q``.
    """
    s = None
    c = None
    order = None
    rows: dict[str, dict[int, list[float]]] = {"a": {}, "alpha": {}, "beta": {}}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "name":
            name = " ".join(rest)
        elif key == "order":
            if len(rest) != 1:
                raise TableauError(f"line {lineno}: 'order' takes one integer")
            try:
                order = int(rest[0])
            except ValueError:
                raise TableauError(f"line {lineno}: bad order {rest[0]!r}") from None
        elif key == "s":
            if len(rest) != 1:
                raise TableauError(f"line {lineno}: 's' takes one integer")
            try:
                s = int(rest[0])
            except ValueError:
                raise TableauError(f"line {lineno}: bad stage count {rest[0]!r}") from None
            if s < 1:
                raise TableauError(f"line {lineno}: stage count must be positive")
        elif key == "c":
            if s is None:
                raise TableauError(f"line {lineno}: 'c' before 's'")
            c = [_real(v, lineno) for v in rest]
            if len(c) != s + 1:
                raise TableauError(f"line {lineno}: expected {s + 1} abscissas, got {len(c)}")
        elif key in rows:
            if s is None:
                raise TableauError(f"line {lineno}: '{key}' row before 's'")
            if not rest:
                raise TableauError(f"line {lineno}: missing row index")
            try:
                i = int(rest[0])
            except ValueError:
                raise TableauError(f"line {lineno}: bad row index {rest[0]!r}") from None
            if not 1 <= i <= s:
                raise TableauError(f"line {lineno}: row index {i} outside 1..{s}")
            vals = [_real(v, lineno) for v in rest[1:]]
            if len(vals) != i:
                raise TableauError(f"line {lineno}: row {i} needs {i} entries, got {len(vals)}")
            if i in rows[key]:
                raise TableauError(f"line {lineno}: duplicate {key} row {i}")
            rows[key][i] = vals
        else:
            raise TableauError(f"line {lineno}: unknown keyword {key!r}")

    if s is None:
        raise TableauError("missing 's' line")
    if c is None:
        raise TableauError("missing 'c' line")
    shu = bool(rows["alpha"] or rows["beta"])
    if shu and rows["a"]:
        raise TableauError("file mixes Butcher 'a' rows with Shu-Osher rows")
    want = ("alpha", "beta") if shu else ("a",)
    for key in want:
        missing = [i for i in range(1, s + 1) if i not in rows[key]]
        if missing:
            raise TableauError(f"missing '{key}' row {missing[0]}")
    if shu:
        return ShuOsherTableau([rows["alpha"][i] for i in range(1, s + 1)],
                               [rows["beta"][i] for i in range(1, s + 1)], c, name, order)
    return ButcherTableau([rows["a"][i] for i in range(1, s + 1)], c, name, order)


def load_tableau(path) -> ButcherTableau | ShuOsherTableau:
    path = Path(path)
    return parse_tableau(path.read_text(), name=path.stem)


def format_tableau(t: ButcherTableau | ShuOsherTableau) -> str:
    """Inverse of :func:`parse_tableau` (17 significant digits)."""
    fmt = lambda v: repr(float(v))  # noqa: E731
    lines = []
    if t.name:
        lines.append(f"name {t.name}")
    if t.order is not None:
        lines.append(f"order {t.order}")
    lines.append(f"s {t.s}")
    lines.append("c " + " ".join(fmt(v) for v in t.c))
    if isinstance(t, ShuOsherTableau):
        for key, m in (("alpha", t.alpha), ("beta", t.beta)):
            for i in range(1, t.s + 1):
                lines.append(f"{key} {i} " + " ".join(fmt(v) for v in m[i, :i]))
    else:
        for i in range(1, t.s + 1):
            lines.append(f"a {i} " + " ".join(fmt(v) for v in t.a[i, :i]))
    return "\n".join(lines) + "\n"


def is_close_tableau(x: ButcherTableau, y: ButcherTableau, tol: float = ROUNDTRIP_TOL) -> bool:
    return x.s == y.s and bool(
        np.all(np.abs(x.a - y.a) <= tol) and np.all(np.abs(x.c - y.c) <= tol)
    )


__all__ = [
    "ButcherTableau", "ShuOsherTableau", "CertificationReport", "StageCheck", "Verdict",
    "TableauError", "validate_butcher", "g_function", "g_derivative", "certify_mbp_butcher",
    "butcher_to_shu_osher", "shu_osher_to_butcher", "certify_mbp_shu_osher", "certify",
    "as_butcher", "builtin_tableaus", "builtin_names", "get_tableau", "parse_tableau",
    "load_tableau", "format_tableau", "sifrk11", "sifrk_s2", "heun33", "ssp_sifrk_s2",
    "ssp_sifrk33", "is_close_tableau",
]
