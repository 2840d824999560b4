import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catqbc.distinguish import (
    CSV_COLUMNS,
    distinguish,
    g_max_analytic,
    h_eigen_analytic,
    helstrom_projectors,
    helstrom_success,
    n_copy_gain,
    reduced_states,
    state_fidelity,
    trace_distance,
)

# mpmath closed forms, scripts/oracles.py
G_ORACLE = {0.5: 0.22170472099251848, 1.0: 0.066450557208519923, 2.0: 0.00016773129507558532}


@pytest.mark.parametrize("alpha", sorted(G_ORACLE))
def test_analytic_gain(alpha):
    assert abs(g_max_analytic(alpha) - G_ORACLE[alpha]) < 1e-15


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
def test_numeric_gain_matches_analytic(alpha):
    rep = distinguish(alpha)
    assert abs(rep.g_max_numeric - rep.g_max_analytic) < 1e-12
    assert abs(rep.lambda_plus - h_eigen_analytic(alpha)[0]) < 1e-12
    assert not rep.degenerate


def test_difference_has_rank_two():
    rho0, rho1 = reduced_states(1.0)
    vals = np.linalg.eigvalsh(rho0.matrix - rho1.matrix)
    assert np.sum(np.abs(vals) > 1e-10) == 2


def test_reduced_states_are_valid():
    for rho in reduced_states(1.3):
        rho.validate()


def test_zero_amplitude_is_degenerate():
    rep = distinguish(0.0)
    assert rep.degenerate and rep.g_max_numeric is None
    assert rep.g_max_analytic == 0.25


def test_small_amplitude_flagged():
    assert distinguish(0.05).degenerate


def test_helstrom_beats_guessing_by_gain():
    rho0, rho1 = reduced_states(1.0)
    assert abs(helstrom_success(rho0, rho1) - (0.5 + g_max_analytic(1.0))) < 1e-12
    p0, p1 = helstrom_projectors(rho0, rho1)
    assert np.allclose(p0.matrix + p1.matrix, np.eye(rho0.dim), atol=1e-12)


def test_trace_distance_is_twice_gain():
    rho0, rho1 = reduced_states(0.8)
    assert abs(trace_distance(rho0, rho1) - 2 * g_max_analytic(0.8)) < 1e-12


def test_fidelity_of_identical_states():
    rho0, _ = reduced_states(1.0)
    assert abs(state_fidelity(rho0, rho0) - 1) < 1e-6


def test_n_copy_gain():
    g = g_max_analytic(math.sqrt(2))
    assert abs(n_copy_gain(g, 1) - g) < 1e-15
    assert n_copy_gain(0.5, 3) == 0.5
    with pytest.raises(ValueError):
        n_copy_gain(-0.1, 2)


def test_report_formats_agree():
    rep = distinguish(1.0)
    row = rep.csv_row()
    assert len(row) == len(CSV_COLUMNS)
    as_json = json.loads(rep.to_json())
    assert float(row[CSV_COLUMNS.index("g_max_numeric")]) == as_json["g_max_numeric"]


def test_negative_alpha_rejected():
    with pytest.raises(ValueError):
        g_max_analytic(-1.0)


@given(st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_gain_decreases_with_amplitude(a, b):
    lo, hi = sorted((a, b))
    assert g_max_analytic(hi) <= g_max_analytic(lo)


@given(st.floats(0.0, 0.5), st.integers(1, 50))
def test_n_copy_gain_grows_with_copies(g, n):
    assert n_copy_gain(g, n) <= n_copy_gain(g, n + 1) + 1e-15
    assert n_copy_gain(g, n) <= min(0.5, n * g) + 1e-15
