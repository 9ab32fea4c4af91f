"""Tests for entire functions, test functions and the function registry."""

import json
import math

import numpy as np
import pytest

from errors import BoundViolation, ConfigError, DomainError
from series.function_registry import FunctionRegistry, get_function_registry, parse_holo
from series.series_core import (
    EntireFunction,
    alternating_function,
    eval_dilation,
    eval_entire,
    exp_function,
    exponential,
    from_coefficients,
    geometric,
    monomial,
    oscillating_function,
    polynomial,
    truncation_index,
)


class TestTruncation:
    def test_zero_modulus(self):
        assert truncation_index(1.0, 0.0, 1e-13) == 0

    @pytest.mark.parametrize("modulus", [0.5, 3.0, 40.0])
    def test_tail_below_tolerance(self, modulus):
        n = truncation_index(1.0, modulus, 1e-13)
        assert n + 2 > modulus
        tail = sum(modulus ** k / math.factorial(k) for k in range(n + 1, n + 200))
        assert tail < 1e-13

    def test_bad_tolerance(self):
        with pytest.raises(DomainError):
            truncation_index(1.0, 1.0, 0.0)

    def test_infinite_argument(self):
        with pytest.raises(DomainError):
            truncation_index(1.0, math.inf, 1e-13)


class TestEntireFunction:
    def test_exp_values(self):
        F = exp_function()
        assert eval_entire(F, 1.0) == pytest.approx(math.e, abs=1e-13)
        np.testing.assert_allclose(F.evaluate_many(np.array([0.0, 1j * math.pi])), [1.0, -1.0], atol=1e-12)

    def test_exp_tail_within_tolerance(self, rng):
        F = exp_function()
        radii = 5.0 * np.sqrt(rng.uniform(size=100))
        points = radii * np.exp(2j * np.pi * rng.uniform(size=100))
        for z in points:
            rounding = 1e-14 * math.exp(abs(z))
            assert abs(eval_entire(F, z, tol=1e-13) - np.exp(z)) <= 1e-13 + rounding

    def test_alternating(self):
        assert alternating_function()(1.0) == pytest.approx(math.exp(-1.0), abs=1e-13)

    def test_oscillating_coefficients_unimodular(self):
        coeffs = oscillating_function().coefficients(50)
        np.testing.assert_allclose(np.abs(coeffs), 1.0)
        assert coeffs[1] == pytest.approx(complex(math.cos(math.sqrt(2)), math.sin(math.sqrt(2))))

    def test_dilation(self):
        assert eval_dilation(exp_function(), 2.0, 0.5) == pytest.approx(math.e, abs=1e-12)

    def test_gamma_below_one(self):
        with pytest.raises(DomainError):
            EntireFunction(lambda n: np.ones(np.shape(n)), gamma=0.5)

    def test_bound_violation(self):
        with pytest.raises(BoundViolation):
            from_coefficients([1.0, 0.5]).coefficients(1)

    def test_finite_sequence_too_short(self):
        F = from_coefficients([1.0, 2.0, -1.5])
        assert F.gamma == pytest.approx(2.0)
        with pytest.raises(DomainError):
            F.coefficients(3)

    def test_sum_is_checked_lazily(self):
        total = exp_function() + alternating_function()
        assert total.gamma == pytest.approx(2.0)
        assert total.label == "exp+alt"
        with pytest.raises(BoundViolation):
            total.coefficients(1)


class TestHoloFunction:
    def test_geometric_derivatives(self):
        g = geometric(2.0)
        np.testing.assert_allclose(g.derivatives(4).real, [1.0, 0.5, 0.5, 0.75])
        assert g.evaluate(1.0) == pytest.approx(2.0)
        assert g.agreement_error() < 1e-12

    def test_outside_radius(self):
        with pytest.raises(DomainError):
            geometric(2.0).evaluate(2.0)

    def test_exponential_zero_rate(self):
        np.testing.assert_allclose(exponential(0).taylor_normalized(3), [1.0, 0.0, 0.0])

    def test_exponential_agreement(self):
        assert exponential(3.0).agreement_error() < 1e-12

    def test_polynomial_and_monomial(self):
        assert polynomial([1, 0, 2]).evaluate(1.0) == pytest.approx(3.0)
        np.testing.assert_allclose(monomial(3).derivatives(5).real, [0, 0, 0, 6, 0])
        with pytest.raises(DomainError):
            monomial(-1)


class TestRegistry:
    def test_singleton(self, registry):
        assert FunctionRegistry() is registry
        assert get_function_registry() is registry

    def test_builtins(self, registry):
        assert {"alt", "exp", "osc"} <= set(registry.labels())

    def test_unknown_label(self, registry):
        with pytest.raises(ConfigError) as info:
            registry.get("sinc")
        assert info.value.reason == "unknown_function"

    def test_load_custom(self, registry, tmp_path):
        path = tmp_path / "wave.json"
        path.write_text(json.dumps([[1, 0], [0, 1], [2, 0]]))
        F = registry.load_custom(path)
        assert F.label == "wave"
        assert F.gamma == pytest.approx(2.0)
        assert registry.get("wave") is F

    def test_load_custom_malformed(self, registry, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"not": "a list"}')
        with pytest.raises(ConfigError) as info:
            registry.load_custom(path)
        assert info.value.reason == "invalid_coefficients"

    def test_load_custom_missing(self, registry, tmp_path):
        with pytest.raises(ConfigError) as info:
            registry.load_custom(tmp_path / "missing.json")
        assert info.value.reason == "file_not_found"


class TestParseHolo:
    @pytest.mark.parametrize(
        "text, z, expected",
        [
            ("geometric:2", 1.0, 2.0),
            ("exp:3", 0.5, math.exp(1.5)),
            ("poly:1,0,2", 2.0, 9.0),
            ("monomial:3", 0.5, 0.125),
        ],
    )
    def test_forms(self, text, z, expected):
        assert parse_holo(text).evaluate(z) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["geometric:abc", "sinc:1"])
    def test_bad_forms(self, text):
        with pytest.raises(ConfigError) as info:
            parse_holo(text)
        assert info.value.reason == "bad_test_function"


def test_bundled_coefficient_file(registry):
    from config import CUSTOM_COEFFS_FILE

    F = registry.load_custom(CUSTOM_COEFFS_FILE)
    assert F.label == "custom_coeffs"
    assert F.gamma == pytest.approx(1.5)
    assert F.length == 32
    assert abs(F(0.5)) > 0
