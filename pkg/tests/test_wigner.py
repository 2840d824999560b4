import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catqbc.fock import (
    CatSpec,
    FockVector,
    Parity,
    TruncationError,
    cat_state,
    coherent_state,
    dim_for_cat,
    displacement_operator,
    number_state,
    parity_expectation,
)
from catqbc.wigner import (
    PhasePoint,
    WignerGrid,
    cat_wigner_grid,
    cat_wigner_on_p_axis,
    wigner_cat_closed_form,
    wigner_grid,
    wigner_point,
    wigner_values,
)


def test_vacuum_is_gaussian():
    vac = number_state(0, 32)
    x, p = 0.7, -0.3
    assert abs(wigner_point(vac, PhasePoint(x, p)) - math.exp(-x * x - p * p) / math.pi) < 1e-12


def test_single_photon_is_negative_at_origin():
    assert abs(wigner_point(number_state(1, 32), PhasePoint(0, 0)) + 1 / math.pi) < 1e-12


def test_coherent_state_is_shifted_gaussian():
    s = coherent_state(1.0 + 0.5j, 64)
    x0, p0 = math.sqrt(2) * 1.0, math.sqrt(2) * 0.5
    val = wigner_values(s, x0 + 0.2, p0)
    assert abs(val - math.exp(-0.04) / math.pi) < 1e-12


@pytest.mark.parametrize("parity", [Parity.ODD, Parity.EVEN])
def test_fock_route_matches_closed_form(parity):
    spec = CatSpec(3 / math.sqrt(2), parity)
    state = cat_state(spec, dim_for_cat(spec.alpha_prime))
    xs = np.linspace(-5, 5, 21)
    X, P = np.meshgrid(xs, xs)
    diff = wigner_values(state, X, P) - wigner_cat_closed_form(spec, X, P)
    assert np.max(np.abs(diff)) < 1e-8


def test_odd_cat_has_negative_fringe_at_origin():
    spec = CatSpec(3 / math.sqrt(2), Parity.ODD)
    assert wigner_cat_closed_form(spec, 0.0, 0.0) < 0
    assert abs(math.pi * wigner_cat_closed_form(spec, 0.0, 0.0) + 1) < 1e-12


def test_p_axis_form_matches_full_form():
    ps = np.linspace(-2, 2, 41)
    for parity in Parity:
        spec = CatSpec(1.7, parity)
        full = math.pi * wigner_cat_closed_form(spec, np.zeros_like(ps), ps)
        assert np.allclose(cat_wigner_on_p_axis(1.7, parity, ps), full, atol=1e-13)


def test_integral_is_one():
    spec = CatSpec(2.0, Parity.ODD)
    grid = cat_wigner_grid(spec, (-8, 8), (-8, 8), 161, 161)
    assert abs(grid.integral() - 1) < 1e-9


def test_grid_layout_rows_over_p():
    grid = cat_wigner_grid(CatSpec(1.0, Parity.EVEN), (-3, 3), (-1, 2), 7, 4)
    assert grid.values.shape == (4, 7)
    assert abs(grid.values[3, 0] - wigner_cat_closed_form(CatSpec(1.0, Parity.EVEN), -3.0, 2.0)) < 1e-15


def test_csv_round_trip_is_exact():
    grid = wigner_grid(cat_state(CatSpec(1.2, Parity.ODD), 64), (-4, 4), (-3, 3), 9, 7)
    back = WignerGrid.from_csv(grid.to_csv())
    assert np.array_equal(back.values, grid.values)
    assert back.x_range == grid.x_range and back.p_range == grid.p_range
    assert back.to_csv() == grid.to_csv()


def test_grid_shape_checked():
    with pytest.raises(ValueError):
        WignerGrid((0, 1), (0, 1), 3, 2, np.zeros((3, 2)))


def test_far_phase_point_refused():
    with pytest.raises(TruncationError):
        wigner_values(number_state(0, 8), 40.0, 0.0)


def test_phase_point_rejects_nan():
    with pytest.raises(ValueError):
        PhasePoint(float("nan"), 0.0)


@given(st.lists(st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False), min_size=2, max_size=20))
def test_origin_value_is_parity(amps):
    v = np.array(amps, dtype=complex)
    if np.linalg.norm(v) < 1e-3:
        return
    s = FockVector(np.pad(v, (0, 12))).normalized()
    assert abs(math.pi * wigner_point(s, PhasePoint(0, 0)) - parity_expectation(s)) < 1e-10


@given(st.floats(0.3, 3.0), st.floats(-1.0, 1.0))
def test_displaced_origin_reads_shifted_wigner(alpha_prime, d):
    # shifting the state by -i d/sqrt2 brings W(0, d) to the origin
    dim = dim_for_cat(alpha_prime)
    cat = cat_state(CatSpec(alpha_prime, Parity.ODD), dim)
    moved = displacement_operator(complex(0, -d) / math.sqrt(2), dim) @ cat
    assert abs(parity_expectation(moved) - cat_wigner_on_p_axis(alpha_prime, Parity.ODD, d)) < 1e-9
