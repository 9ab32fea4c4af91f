"""End-to-end checks of the interpolation, capacity, zero-count and Laplace results."""

import math

import numpy as np
import pytest

from cli.main import RunConfig, run_bounds, run_interp
from engine.capacity import CompactSetDescriptor, capacity_limits, equilibrium_moments, fekete_search, vm_sequence
from engine.laplace import atomic_bound_experiment, chi_r_family, dirac_example_lambda, lambda_limit_abs, SpectralMeasure
from engine.vandermonde import FrequencyTuple, vandermonde_matrix, vdm_inverse
from engine.zeros import nm_experiment
from tests.conftest import jittered_roots

CIRCLE = CompactSetDescriptor.parse("circle:1")
SEGMENT = CompactSetDescriptor.parse("segment:-1,1")


@pytest.mark.timeout(10)
def test_interpolation_error_within_bound():
    config = RunConfig(subcommand="interp", set_descriptor="disk:1", m_range=[4, 8, 12], trials=20, g="geometric:2")
    rows = run_interp(config)
    assert len(rows) == 60
    assert all(row["err"] <= row["bound"] + 1e-8 for row in rows)
    for row in rows:
        assert abs(row["err"] - row["err_direct"]) <= config.tol * (1.0 + row["norm_1"])
        assert row["agrees"]
    assert max(row["z_abs"] for row in rows) <= 0.6


def test_operator_norm_witness_and_extremal_bracket():
    config = RunConfig(subcommand="bounds", set_descriptor="disk:1", m_range=list(range(2, 13)), trials=5)
    rows = run_bounds(config)
    assert len(rows) >= 50
    assert all(row["witness_in_bracket"] for row in rows)
    assert all(row["extremal_ok"] for row in rows)


def test_inverse_vandermonde_residuals(rng):
    for trial in range(100):
        m = 2 + trial % 11
        q = jittered_roots(m, rng)
        residual = vandermonde_matrix(q) @ vdm_inverse(q).matrix - np.eye(m)
        assert np.max(np.abs(residual)) < 1e-9


@pytest.mark.timeout(5)
def test_circle_capacity_limit(exp_F):
    row = capacity_limits(CIRCLE, exp_F, 200, m_values=[200])[0]
    assert row["normalized_upper"] == pytest.approx(math.e, rel=0.05)
    assert row["normalized_lower"] == pytest.approx(math.e, rel=0.05)
    assert row["normalized_lower"] <= math.e <= row["normalized_upper"]


def test_transfinite_diameter_classics():
    circle = vm_sequence(CIRCLE, 40)[-1]
    assert circle["d_estimate"] == pytest.approx(1.0, rel=0.05)
    segment = vm_sequence(SEGMENT, 40, grid_n=2048)[-1]
    assert segment["m"] == 40
    assert segment["d_estimate"] == pytest.approx(0.5, rel=0.08)


def test_equilibrium_moments():
    np.testing.assert_allclose(equilibrium_moments(FrequencyTuple.roots_of_unity(30), 29), 0.0, atol=1e-12)
    moments = equilibrium_moments(fekete_search(SEGMENT, 60), 6).real
    for k, expected in ((2, 0.5), (4, 0.375), (6, 0.3125)):
        assert abs(moments[k - 1] - expected) < 0.05


def test_zero_counts_on_circle(exp_F):
    rows = nm_experiment(CIRCLE, exp_F, [5, 10, 20])
    assert all(row["count"] >= row["m"] - 1 for row in rows)
    ratios = [row["ratio"] for row in rows]
    assert max(ratios) < 1.0
    assert ratios[0] >= ratios[1] >= ratios[2]


def test_laplace_norm_bound_for_unit_measures(exp_F):
    rows = atomic_bound_experiment(exp_F, [8], trials=50)
    assert all(row["norm_inf"] <= 1.0 + 1e-9 for row in rows)
    assert all(row["two_path_gap"] < 1e-8 for row in rows)


def test_dirac_example():
    for k in range(1, 51):
        assert dirac_example_lambda(2 * k) == pytest.approx(1.0, abs=1e-10)
    for m in range(1, 102):
        assert dirac_example_lambda(m, shifted=True) == pytest.approx(1.0, abs=1e-10)
    odd = [dirac_example_lambda(2 * k + 1) for k in (5, 50, 500)]
    assert odd[0] < odd[1] < odd[2]
    assert odd[2] > 2 * odd[0]


def test_fourier_limit_and_chi_r():
    cosine = SpectralMeasure.circle_density({1: 0.5, -1: 0.5})
    assert lambda_limit_abs(cosine, [64])[0]["lambda"] == pytest.approx(math.pi, abs=1e-6)
    rows = {r: chi_r_family(r, 64) for r in (0.9, 0.99, 0.999)}
    for r in (0.9, 0.99):
        assert rows[r].l1_norm_chi == pytest.approx(4 * math.pi, abs=1e-3)
    assert rows[0.999].l1_norm_chi_minus >= 1.5 * rows[0.9].l1_norm_chi_minus
