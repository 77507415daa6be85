import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sifrk.diagnostics import (CURVE_HEADER, ErrorReport, MBPMonitor, RateTable, convergence_rates,
                               curve_csv, discrete_energy, display_rate, error_report, l2_error, linf_error,
                               mbp_monitor, write_curve)
from sifrk.nonlinearity import cubic, flory_huggins
from sifrk.spectral import Field, Grid, GridMismatch, OperatorSymbol
from sifrk.stepper import StepRecord


def naive_energy(u, h, bc, diffusivity, F):
    """Double loop over points with explicit neighbour lookup."""
    nx, ny = u.shape
    total_grad = 0.0
    total_F = 0.0
    for i in range(nx):
        for j in range(ny):
            lap = 0.0
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if bc == "periodic":
                    a, b = a % nx, b % ny
                else:
                    a, b = min(max(a, 0), nx - 1), min(max(b, 0), ny - 1)
                lap += u[a, b] - u[i, j]
            lap *= diffusivity / h**2
            total_grad += -0.5 * u[i, j] * lap
            total_F += float(F(u[i, j]))
    return h * h * (total_grad + total_F)


def test_energy_zero_field():
    eps = 0.1
    g = Grid.uniform(2, 8)
    sym = OperatorSymbol(g, 1.0)
    assert discrete_energy(sym, cubic(eps**2), Field(g, np.zeros(g.shape))) == \
        pytest.approx(1.0 / (4 * eps**2), rel=1e-14)


def test_energy_of_one_is_zero():
    g = Grid.uniform(2, 8, bc="neumann")
    assert discrete_energy(OperatorSymbol(g, 0.5), cubic(1.0), Field(g, np.ones(g.shape))) == 0.0


@pytest.mark.parametrize("bc", ["periodic", "neumann"])
def test_energy_vs_naive_oracle(bc):
    g = Grid.uniform(2, 12, bc=bc)
    u = np.random.default_rng(2).uniform(-0.9, 0.9, g.shape)
    spec = flory_huggins()
    got = discrete_energy(OperatorSymbol(g, 0.01, kappa=5.0), spec, Field(g, u))
    ref = naive_energy(u, g.h[0], bc, 0.01, spec.F)
    assert got == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("bc", ["periodic", "neumann"])
def test_energy_stencil_vs_spectral(bc):
    g = Grid.uniform(2, 16, bc=bc)
    u = np.random.default_rng(4).uniform(-1, 1, g.shape)
    sym = OperatorSymbol(g, 0.3)
    spec = cubic(1.0)
    quad = -0.5 * np.sum(u * sym.laplacian_spectral(u))
    spectral = g.cell_volume * (quad + np.sum(spec.F(u)))
    assert discrete_energy(sym, spec, Field(g, u)) == pytest.approx(spectral, rel=1e-10)


def test_energy_grid_mismatch():
    g = Grid.uniform(1, 8)
    with pytest.raises(GridMismatch):
        discrete_energy(OperatorSymbol(Grid.uniform(1, 16)), cubic(), Field(g, np.zeros(8)))


def test_error_norms():
    g = Grid.uniform(2, 8, box=(0.0, 2.0))
    u = Field(g, np.random.default_rng(0).standard_normal(g.shape))
    assert l2_error(u, u) == 0.0 and linf_error(u, u) == 0.0
    v = Field(g, u.data - 0.3)
    assert l2_error(u, v) == pytest.approx(0.3 * math.sqrt(4.0), rel=1e-13)
    assert linf_error(u, v) == pytest.approx(0.3, rel=1e-13)
    w = Field(g, np.random.default_rng(1).standard_normal(g.shape))
    d = [(a - b) for a, b in zip(u.data.ravel(), w.data.ravel())]
    assert l2_error(u, w) == pytest.approx(math.sqrt(g.cell_volume * sum(x * x for x in d)))
    assert linf_error(u, w) == max(abs(x) for x in d)
    rep = error_report(u, w, 0.1, "x")
    assert isinstance(rep, ErrorReport) and rep.l2 >= 0 and rep.tau_or_h == 0.1
    with pytest.raises(GridMismatch):
        l2_error(u, Field(Grid.uniform(2, 8), u.data))


def test_rates_quadratic():
    errs = [(2.0**-k, 3.0 * 4.0**-k) for k in range(5)]
    table = convergence_rates(errs)
    assert table.rows[0].l2_rate is None
    assert all(r.l2_rate == pytest.approx(2.0, abs=1e-12) for r in table.rows[1:])


def test_rates_reference_pairs():
    # reference rate columns truncate to two decimals
    t = convergence_rates([(1.0, 1.7488e-2), (0.5, 4.5077e-3)])
    assert display_rate(t.finest_rate()) == "1.95"
    t = convergence_rates([(1.0, 4.1342e-3), (0.5, 4.6608e-4)])
    assert display_rate(t.finest_rate()) == "3.14"
    t = convergence_rates([(1 / 512, 2.0878e-3, 1.0), (1 / 1024, 5.2727e-4, 1.0)])
    assert display_rate(t.finest_rate("l2")) == "1.98"
    assert "1.98" in t.format()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(1e-12, 1e3), min_size=2, max_size=8), st.floats(1e-6, 1e6))
def test_rates_scale_invariant(errs, scale):
    res = [2.0**-k for k in range(len(errs))]
    a = convergence_rates(list(zip(res, errs)))
    b = convergence_rates([(r, e * scale) for r, e in zip(res, errs)])
    for x, y in zip(a.rows[1:], b.rows[1:]):
        assert abs(x.l2_rate - y.l2_rate) <= 1e-12 * max(1.0, abs(x.l2_rate))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 4.0), st.floats(1e-3, 10.0), st.integers(2, 7))
def test_rates_recover_power_law(p, C, levels):
    errs = [(2.0**-k, C * 2.0 ** (-p * k)) for k in range(levels)]
    for r in convergence_rates(errs).rows[1:]:
        assert r.l2_rate == pytest.approx(p, abs=1e-9)


def test_rates_errors():
    with pytest.raises(ValueError):
        convergence_rates([(1.0, 0.0), (0.5, 1.0)])
    with pytest.raises(ValueError):
        convergence_rates([(0.5, 1.0), (1.0, 0.5)])


def test_rate_table_csv(tmp_path):
    t = convergence_rates([(0.1, 1e-2, 2e-2), (0.05, 2.5e-3, 5e-3)], "x")
    text = t.to_csv()
    lines = text.splitlines()
    assert lines[0] == "resolution,l2,l2_rate,linf,linf_rate"
    assert lines[1] == "1.000000000000e-01,1.000000000000e-02,,2.000000000000e-02,"
    assert lines[2].split(",")[2] == "2.000000000000e+00"
    t.write_csv(tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text() == text
    assert "rate" in t.format()
    assert isinstance(t, RateTable)


def rec(n, norm, stages=None):
    return StepRecord(n, n * 0.1, norm, 0.0, stages)


def test_monitor_flags_first_excess():
    m = mbp_monitor(1.0)
    for n, x in enumerate([0.9, 1.0 + 5e-13, 1.0 + 1e-9, 1.2]):
        m(rec(n, x))
    assert m.flag_step == 2 and m.flag_time == pytest.approx(0.2)
    assert m.max_norm == 1.2


def test_monitor_sees_stage_norms():
    m = MBPMonitor(1.0)
    m(rec(0, 0.5, [0.7, 1.01]))
    assert m.flagged


def test_monitor_infinite_gamma_and_stop():
    m = MBPMonitor(math.inf)
    assert not m(rec(0, 1e300)) and not m.flagged
    m = MBPMonitor(1.0, stop_on_flag=True)
    assert m(rec(3, 2.0)) is True
    assert m.observe(4, 0.4, np.array([3.0])) is True and m.flag_step == 3
    with pytest.raises(ValueError):
        MBPMonitor(0.0)


def test_curve_format(tmp_path):
    rows = [StepRecord(0, 0.0, 0.9, -1.5), StepRecord(10, 0.1, 0.8, -1.75)]
    text = curve_csv(rows)
    assert text.startswith(CURVE_HEADER)
    assert text.splitlines()[1] == "0,0.000000000000e+00,9.000000000000e-01,-1.500000000000e+00"
    write_curve(tmp_path / "c.csv", rows)
    assert (tmp_path / "c.csv").read_text() == text
