"""Tests for winding numbers, zero counts and the zero-count table."""

import math

import numpy as np
import pytest

from engine.capacity import CompactSetDescriptor
from engine.interpolation import FPolynomial, extremal_fpoly
from engine.vandermonde import FrequencyTuple
from engine.zeros import (
    Winding,
    count_zeros,
    growth_check,
    growth_lower_bound,
    nm_experiment,
    winding_number,
    zero_count_bound,
)
from errors import ContourThroughZero, DomainError, NonConvergent
from tests.conftest import jittered_roots


class TestWinding:
    def test_monomial(self):
        assert winding_number(lambda z: z ** 3, 1.0).raw == pytest.approx(3.0)

    def test_polynomial_with_outer_root(self):
        winding = winding_number(lambda z: (z - 0.5) * (z - 2.0), 1.0)
        assert round(winding.raw) == 1

    def test_refinement_cap(self):
        with pytest.raises(NonConvergent):
            winding_number(lambda z: z ** 5000, 1.0, samples=6, max_points=30)


class TestCountZeros:
    def test_sinh_has_one_zero(self, exp_F):
        f = FPolynomial(FrequencyTuple.from_points([1.0, -1.0]), [1.0, -1.0], exp_F)
        assert count_zeros(f).count == 1

    def test_exp_minus_one_on_large_contour(self, exp_F):
        f = FPolynomial(FrequencyTuple.from_points([1.0, 0.0]), [1.0, -1.0], exp_F)
        assert count_zeros(f, radius=7.0).count == 3

    def test_contour_nudged_past_zero(self, exp_F):
        a = 1.0 + 1e-6
        f = FPolynomial(FrequencyTuple.from_points([1.0, 0.0]), [1.0, -math.exp(a)], exp_F)
        result = count_zeros(f, radius=a)
        assert result.count == 1
        assert result.radius > a

    def test_zero_polynomial(self, exp_F):
        with pytest.raises(DomainError):
            count_zeros(FPolynomial(FrequencyTuple.roots_of_unity(3), np.zeros(3), exp_F))

    def test_contour_through_zero(self, exp_F, mocker):
        mocker.patch("engine.zeros.winding_number", return_value=Winding(raw=0.0, min_abs=0.0, max_abs=1.0, points=8))
        f = FPolynomial(FrequencyTuple.from_points([1.0, -1.0]), [1.0, -1.0], exp_F)
        with pytest.raises(ContourThroughZero):
            count_zeros(f)

    def test_large_residual(self, exp_F, mocker):
        mocker.patch("engine.zeros.winding_number", return_value=Winding(raw=0.5, min_abs=1.0, max_abs=1.0, points=8))
        f = FPolynomial(FrequencyTuple.from_points([1.0, -1.0]), [1.0, -1.0], exp_F)
        with pytest.raises(NonConvergent):
            count_zeros(f)

    @pytest.mark.parametrize("m", [5, 10])
    def test_circle_extremal(self, m, exp_F):
        f = extremal_fpoly(FrequencyTuple.roots_of_unity(m), exp_F)
        result = count_zeros(f)
        assert result.count == m - 1
        assert result.winding_residual < 0.25

    def test_zero_free_sum(self, exp_F):
        # 1 + e^(z/10) + e^(z/5) has positive real part on the closed unit disk
        f = FPolynomial(FrequencyTuple.from_points([0.0, 0.1, 0.2]), np.ones(3), exp_F)
        assert f.vanishing_order(20, 1e-9) == 0
        assert count_zeros(f).count == 0

    @pytest.mark.parametrize("m", [4, 7])
    def test_origin_order_is_measured(self, m, exp_F, rng):
        q = jittered_roots(m, rng)
        f = FPolynomial(q, extremal_fpoly(q, exp_F).coeffs, exp_F)
        assert f.vanishing_order(3 * m, 1e-9) == m - 1
        assert count_zeros(f).count >= m - 1

    def test_order_drops_with_one_coefficient_perturbed(self, exp_F):
        q = FrequencyTuple.roots_of_unity(6)
        coeffs = extremal_fpoly(q, exp_F).coeffs.copy()
        coeffs[0] *= 1.01
        assert FPolynomial(q, coeffs, exp_F).vanishing_order(20, 1e-9) == 0


class TestBounds:
    def test_zero_count_bound_positive(self):
        assert zero_count_bound(10, 1.0, 1.0, 1.0) > 9

    def test_bound_radius(self):
        with pytest.raises(DomainError):
            zero_count_bound(10, 1.0, 1.0, 1.0, r=1.0)

    def test_growth_lower_bound(self):
        assert growth_lower_bound(0, 3.0) == 1.0
        assert growth_lower_bound(2, 3.0) == pytest.approx((10.0 / 6.0) ** 2)

    def test_growth_check_holds(self, exp_F):
        f = extremal_fpoly(FrequencyTuple.roots_of_unity(5), exp_F)
        check = growth_check(f, 4)
        assert check["holds"]
        assert check["observed_growth"] >= check["forced_growth"]


class TestExperiment:
    def test_circle_table(self, exp_F):
        rows = nm_experiment(CompactSetDescriptor.parse("circle:1"), exp_F, [5, 10, 20], trials=2)
        assert [row["m"] for row in rows] == [5, 10, 20]
        for row in rows:
            assert row["count"] >= row["m"] - 1
            assert row["missing"] == 0
            assert row["count"] <= row["bound_at_r"]
        ratios = [row["ratio"] for row in rows]
        assert all(r < 1.0 for r in ratios)
        assert ratios == sorted(ratios, reverse=True)

    def test_trials_checked(self, exp_F):
        with pytest.raises(DomainError):
            nm_experiment(CompactSetDescriptor.parse("circle:1"), exp_F, [5], trials=0)
