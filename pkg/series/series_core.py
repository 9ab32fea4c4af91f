"""
Entire functions given by Taylor data and holomorphic test functions.

An EntireFunction F is described by its derivatives at the origin F_n = F^(n)(0)
with 1 <= |F_n| <= gamma. Evaluation truncates the Taylor series at the first
index where a geometric majorant of the tail drops below the requested tolerance.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from config import NUMERICS_CONFIG
from errors import BoundViolation, DomainError

logger = logging.getLogger(__name__)

# Vectorized rule n -> values for an integer index array
CoefficientRule = Callable[[np.ndarray], np.ndarray]

BOUND_SLACK = 1e-12
SQRT2 = math.sqrt(2.0)


def truncation_index(gamma: float, modulus: float, tol: float) -> int:
    """
    Smallest N with gamma*|w|^(N+1) / ((N+1)! (1 - |w|/(N+2))) < tol and N+2 > |w|.

    Args:
        gamma: Bound on |F_n|
        modulus: |w|, the largest argument to be evaluated
        tol: Absolute tail tolerance

    Returns:
        Truncation index N (terms 0..N are summed)
    """
    if tol <= 0:
        raise DomainError(f"Tolerance must be positive, got {tol}")
    if modulus == 0.0:
        return 0
    if not math.isfinite(modulus):
        raise DomainError("Cannot evaluate an entire function at infinity")

    log_tol = math.log(tol)
    log_gamma = math.log(gamma)
    log_w = math.log(modulus)
    n = max(0, int(math.ceil(modulus)) - 1)
    while True:
        ratio = modulus / (n + 2)
        if ratio < 1.0:
            tail = log_gamma + (n + 1) * log_w - gammaln(n + 2) - math.log1p(-ratio)
            if tail < log_tol:
                return n
        n += 1


@dataclass(frozen=True)
class EntireFunction:
    """
    Entire function F with Taylor data F_n and bound 1 <= |F_n| <= gamma.

    Coefficients are produced on demand by `coefficient_rule`; the bound is
    checked every time coefficients are accessed. `length` limits finite
    custom sequences.
    """

    coefficient_rule: CoefficientRule
    gamma: float = 1.0
    label: str = "F"
    length: Optional[int] = None

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise DomainError(f"Bound constant must be >= 1, got {self.gamma}")

    def coefficients(self, n_max: int) -> np.ndarray:
        """
        Return F_0, ..., F_{n_max}.

        Raises:
            DomainError: If a finite sequence is too short
            BoundViolation: If some |F_n| lies outside [1, gamma]
        """
        if n_max < 0:
            return np.zeros(0, dtype=np.complex128)
        if self.length is not None and n_max >= self.length:
            raise DomainError(
                f"'{self.label}' has {self.length} coefficients, evaluation needs {n_max + 1}"
            )
        values = np.asarray(self.coefficient_rule(np.arange(n_max + 1)), dtype=np.complex128)
        magnitudes = np.abs(values)
        bad = (magnitudes < 1.0 - BOUND_SLACK) | (magnitudes > self.gamma * (1.0 + BOUND_SLACK))
        if np.any(bad):
            n = int(np.argmax(bad))
            raise BoundViolation(
                f"|F_{n}| = {magnitudes[n]:.6g} of '{self.label}' outside [1, {self.gamma:g}]"
            )
        return values

    def coefficient(self, n: int) -> complex:
        return complex(self.coefficients(n)[n])

    def evaluate_many(self, w, tol: float = NUMERICS_CONFIG["default_tol"]) -> np.ndarray:
        """Evaluate F at every point of w by nested Horner on the truncated series."""
        w = np.asarray(w, dtype=np.complex128)
        if w.size == 0:
            return w.copy()
        n_max = truncation_index(self.gamma, float(np.max(np.abs(w))), tol)
        coeffs = self.coefficients(n_max)
        # b <- F_n + b*w/(n+1) gives sum F_n w^n / n!
        acc = np.full(w.shape, coeffs[n_max], dtype=np.complex128)
        for n in range(n_max - 1, -1, -1):
            acc = coeffs[n] + acc * w / (n + 1)
        return acc

    def __call__(self, z, tol: float = NUMERICS_CONFIG["default_tol"]):
        values = self.evaluate_many(np.atleast_1d(z), tol)
        return complex(values[0]) if np.ndim(z) == 0 else values

    def __add__(self, other: "EntireFunction") -> "EntireFunction":
        if not isinstance(other, EntireFunction):
            return NotImplemented
        left, right = self.coefficient_rule, other.coefficient_rule
        lengths = [n for n in (self.length, other.length) if n is not None]
        return EntireFunction(
            coefficient_rule=lambda n: np.asarray(left(n), dtype=np.complex128) + np.asarray(right(n), dtype=np.complex128),
            gamma=self.gamma + other.gamma,
            label=f"{self.label}+{other.label}",
            length=min(lengths) if lengths else None,
        )


def eval_entire(F: EntireFunction, z: complex, tol: float = NUMERICS_CONFIG["default_tol"]) -> complex:
    """Truncated Taylor evaluation of F at z with absolute error below tol."""
    return complex(F.evaluate_many(np.array([z], dtype=np.complex128), tol)[0])


def eval_dilation(F: EntireFunction, q: complex, z: complex, tol: float = NUMERICS_CONFIG["default_tol"]) -> complex:
    """F(q z)."""
    return eval_entire(F, complex(q) * complex(z), tol)


def exp_function() -> EntireFunction:
    """F = exp: all F_n = 1, gamma = 1."""
    return EntireFunction(lambda n: np.ones(np.shape(n), dtype=np.complex128), 1.0, "exp")


def alternating_function() -> EntireFunction:
    """F(z) = exp(-z): F_n = (-1)^n."""
    return EntireFunction(lambda n: np.where(np.asarray(n) % 2 == 0, 1.0, -1.0).astype(np.complex128), 1.0, "alt")


def oscillating_function(phase_rule: Optional[Callable[[np.ndarray], np.ndarray]] = None, label: str = "osc") -> EntireFunction:
    """
    F_n = exp(i*theta_n) for a vectorized phase rule (default theta_n = sqrt(2)*n).
    """
    rule = phase_rule or (lambda n: SQRT2 * np.asarray(n, dtype=float))
    return EntireFunction(lambda n: np.exp(1j * np.asarray(rule(n), dtype=float)), 1.0, label)


def from_coefficients(values: Sequence[complex], label: str = "custom", gamma: Optional[float] = None) -> EntireFunction:
    """
    Finite custom coefficient sequence.

    Args:
        values: F_0, F_1, ... as complex numbers
        label: Registry label
        gamma: Bound constant (default: max |F_n|, at least 1)
    """
    data = np.asarray(values, dtype=np.complex128)
    if data.size == 0:
        raise DomainError("Custom coefficient sequence is empty")
    if gamma is None:
        gamma = max(1.0, float(np.max(np.abs(data))))
    return EntireFunction(lambda n: data[np.asarray(n)], float(gamma), label, length=int(data.size))


@dataclass(frozen=True)
class HoloFunction:
    """
    Holomorphic function g in the disk of radius `radius`.

    Stores the normalized Taylor rule a_n = g_n / n! (the power-series
    coefficients), so geometric data stays representable for large n.
    """

    normalized_rule: CoefficientRule
    radius: float
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = "g"
    fallback_terms: int = field(default=512, compare=False)

    def taylor_normalized(self, count: int) -> np.ndarray:
        """a_0, ..., a_{count-1}."""
        return np.asarray(self.normalized_rule(np.arange(count)), dtype=np.complex128)

    def derivatives(self, count: int) -> np.ndarray:
        """g_n = g^(n)(0) for n < count."""
        n = np.arange(count)
        return self.taylor_normalized(count) * np.exp(gammaln(n + 1))

    def taylor_sum(self, z, terms: Optional[int] = None) -> np.ndarray:
        """Partial Taylor sum with `terms` terms (Horner)."""
        z = np.asarray(z, dtype=np.complex128)
        coeffs = self.taylor_normalized(terms or self.fallback_terms)
        acc = np.zeros(z.shape, dtype=np.complex128)
        for a in coeffs[::-1]:
            acc = acc * z + a
        return acc

    def evaluate(self, z):
        """g(z) by the closed form when attached, else by the Taylor sum."""
        values = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        if np.any(np.abs(values) >= self.radius):
            raise DomainError(f"|z| must be below the radius {self.radius:g} of '{self.label}'")
        out = self.evaluator(values) if self.evaluator is not None else self.taylor_sum(values)
        out = np.asarray(out, dtype=np.complex128)
        return complex(out[0]) if np.ndim(z) == 0 else out

    def agreement_error(self, points: int = 16, seed: int = 0, terms: int = 160) -> float:
        """
        Max relative gap between the evaluator and the Taylor sum at random points.

        Points are drawn in |z| <= radius/2 (|z| <= 2 for entire g).
        """
        if self.evaluator is None:
            return 0.0
        rng = np.random.default_rng(seed)
        r_max = self.radius / 2.0 if math.isfinite(self.radius) else 2.0
        rho = r_max * np.sqrt(rng.uniform(0.0, 1.0, points))
        z = rho * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, points))
        closed = np.asarray(self.evaluator(z), dtype=np.complex128)
        series = self.taylor_sum(z, terms)
        return float(np.max(np.abs(closed - series) / np.maximum(1.0, np.abs(closed))))


def geometric(R: float) -> HoloFunction:
    """g(z) = 1/(1 - z/R), holomorphic in the disk of radius R."""
    if R <= 0:
        raise DomainError(f"Radius must be positive, got {R}")
    return HoloFunction(
        normalized_rule=lambda n: np.power(1.0 / R, np.asarray(n, dtype=float)).astype(np.complex128),
        radius=float(R),
        evaluator=lambda z: 1.0 / (1.0 - z / R),
        label=f"geometric:{R:g}",
    )


def exponential(a: complex) -> HoloFunction:
    """g(z) = exp(a z), entire."""
    a = complex(a)

    def rule(n):
        n = np.asarray(n)
        if a == 0:
            return (n == 0).astype(np.complex128)
        return np.exp(n * np.log(a) - gammaln(n + 1))

    return HoloFunction(rule, math.inf, lambda z: np.exp(a * z), label=f"exp:{a:g}")


def polynomial(coeffs: Sequence[complex]) -> HoloFunction:
    """g(z) = sum p_k z^k from ordinary power coefficients p_0, p_1, ..."""
    data = np.asarray(coeffs, dtype=np.complex128)

    def rule(n):
        n = np.asarray(n)
        out = np.zeros(n.shape, dtype=np.complex128)
        inside = n < data.size
        out[inside] = data[n[inside]]
        return out

    return HoloFunction(
        rule, math.inf, lambda z: np.polyval(data[::-1], z), label="poly:" + ",".join(f"{c:g}" for c in data)
    )


def monomial(k: int) -> HoloFunction:
    """g(z) = z^k."""
    if k < 0:
        raise DomainError(f"Monomial degree must be >= 0, got {k}")
    coeffs = np.zeros(k + 1, dtype=np.complex128)
    coeffs[k] = 1.0
    g = polynomial(coeffs)
    return HoloFunction(g.normalized_rule, g.radius, g.evaluator, label=f"monomial:{k}")
