"""Hitting metrics and fits: threshold scan, least squares, sweeps."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwcarbon.analysis import (
    FitResult,
    SWEEP_FAMILIES,
    ThresholdNotReached,
    format_fit_table,
    linear_fit,
    n_half,
    scaling_sweep,
)
from qwcarbon.coins import hadamard
from qwcarbon.engine import TransportRecord, evolve_absorbing, make_initial_state
from qwcarbon.graphs import build_cycle, compute_levels

from _oracles import dense_absorbing_arrival, least_squares_by_normal_equations


def record_from(arrival):
    arrival = np.asarray(arrival, dtype=float)
    return TransportRecord(arrival=arrival, avg_level=np.zeros_like(arrival))


def test_n_half_simple():
    assert n_half(record_from([0.0, 0.6, 0.7])) == 1
    assert n_half(record_from([0.0, 0.5])) == 1  # threshold is inclusive
    assert n_half(record_from([0.7])) == 0


def test_n_half_not_reached_carries_max():
    with pytest.raises(ThresholdNotReached) as err:
        n_half(record_from([0.0, 0.1, 0.49]))
    assert err.value.max_arrival == pytest.approx(0.49)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=0.2), min_size=1, max_size=40))
def test_n_half_invariant_under_extension(increments):
    arrival = np.cumsum(increments)
    arrival = np.minimum(arrival, 1.0)
    if arrival[-1] < 0.5:
        return
    short = record_from(arrival)
    longer = record_from(np.concatenate([arrival, np.full(10, arrival[-1])]))
    assert n_half(short) == n_half(longer)


def test_n_half_c18_frozen_against_dense_oracle():
    """C18 Hadamard hitting step, frozen from the dense-matrix oracle.

    The table fit 2.12*x - 2.00 predicts 19.2 at ten levels; the exact
    simulated value is 19.
    """
    g = build_cycle(18)
    lm = compute_levels(g, [0])
    oracle = dense_absorbing_arrival(g, hadamard().entries, [0], lm.target_set, 40)
    oracle_n05 = int(np.flatnonzero(oracle >= 0.5)[0])
    assert oracle_n05 == 19
    rec = evolve_absorbing(make_initial_state(g, [0], 2), g, hadamard(), lm.target_set, 40, lm)
    assert n_half(rec) == 19


def test_linear_fit_exact_line():
    fit = linear_fit([(0, 1), (1, 3), (2, 5), (10, 21)])
    assert fit.m == pytest.approx(2.0, abs=1e-12)
    assert fit.b == pytest.approx(1.0, abs=1e-12)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_linear_fit_matches_normal_equations_oracle():
    pts = [(10, 19), (14, 27), (20, 41), (30, 61), (40, 83)]
    fit = linear_fit(pts)
    m, b, r2 = least_squares_by_normal_equations(pts)
    assert fit.m == pytest.approx(m, rel=1e-12)
    assert fit.b == pytest.approx(b, rel=1e-12)
    assert fit.r2 == pytest.approx(r2, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.integers(min_value=0, max_value=50),
            st.floats(min_value=-100, max_value=100),
        ),
        min_size=2,
        max_size=12,
    )
)
def test_linear_fit_residual_orthogonality(pts):
    xs = {p[0] for p in pts}
    if len(xs) < 2:
        with pytest.raises(ValueError):
            linear_fit(pts)
        return
    fit = linear_fit(pts)
    x = np.array([p[0] for p in pts], float)
    y = np.array([p[1] for p in pts], float)
    r = y - (fit.m * x + fit.b)
    scale = max(1.0, np.abs(y).max())
    assert abs(r.sum()) < 1e-9 * scale * len(pts)
    assert abs((x * r).sum()) < 1e-9 * scale * len(pts) * max(1.0, np.abs(x).max())
    assert fit.r2 <= 1.0 + 1e-12


def test_linear_fit_degenerate():
    with pytest.raises(ValueError):
        linear_fit([(3, 1), (3, 2)])
    with pytest.raises(ValueError):
        linear_fit([(3, 1)])


def test_cycle_family_slope_in_ballistic_band():
    fit = scaling_sweep("cycle", sizes=[6, 10, 14])
    assert 2.0 <= fit.m <= 2.25
    assert fit.excluded == ()


def test_sweep_excludes_unreached_structures():
    with pytest.warns(UserWarning):
        fit = scaling_sweep("cycle", sizes=[6, 8, 30], steps_budget=25)
    # the 30-level cycle cannot reach 50% within 25 steps
    assert [size for size, _ in fit.excluded] == [30]
    assert len(fit.points) == 2


def test_sweep_errors():
    with pytest.raises(ValueError):
        scaling_sweep("moebius")
    with pytest.raises(ValueError):
        scaling_sweep("cycle", sizes=[10])
    with pytest.raises(ValueError):
        # all structures excluded -> not enough points to fit
        with pytest.warns(UserWarning):
            scaling_sweep("cycle", sizes=[20, 30], steps_budget=10)


def test_families_registry():
    assert set(SWEEP_FAMILIES) == {
        "cycle",
        "loop-zigzag",
        "loop-armchair",
        "capped-zigzag",
        "capped-armchair",
    }


def test_format_fit_table():
    fit = FitResult(m=2.0, b=-1.0, r2=0.999, points=((1, 1), (2, 3)))
    text = format_fit_table([("cycle", fit)])
    lines = text.strip().splitlines()
    assert lines[0] == "structure,m,b,r2"
    assert lines[1] == "cycle,2.0,-1.0,0.999"
