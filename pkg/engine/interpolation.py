"""
Pade-Taylor interpolation by F-polynomials.

An F-polynomial is f(z) = sum_j c_j F(q_j z). The interpolant T_{F,q} g is the
unique one whose derivatives at 0 agree with g through order m-1; its
coefficients are c = V (g_k / F_k) with V the inverse Vandermonde matrix.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel
from scipy.special import gammaln

from config import NUMERICS_CONFIG, SAMPLING_CONFIG
from engine.vandermonde import (
    FrequencyTuple,
    node_products,
    schur_ratio_table,
    vandermonde_matrix,
    vdm_det_deleted,
    vdm_inverse,
)
from errors import DomainError
from series.function_registry import get_function_registry
from series.series_core import EntireFunction, HoloFunction, truncation_index
from utils.serialization import complex_pairs, pairs_to_complex

logger = logging.getLogger(__name__)

DEFAULT_TOL = NUMERICS_CONFIG["default_tol"]
ROUNDING_FLOOR = 8.0 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class FPolynomial:
    """f(z) = sum_j coeffs[j] * F(freqs[j] * z)."""

    freqs: FrequencyTuple
    coeffs: np.ndarray
    F: EntireFunction

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if coeffs.size != self.freqs.m:
            raise DomainError(f"Expected {self.freqs.m} coefficients, got {coeffs.size}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def m(self) -> int:
        return self.freqs.m

    @property
    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    @property
    def norm_1(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def moments(self, count: int, floor: float = 0.0) -> np.ndarray:
        """
        mu_l = sum_j c_j q_j^l for l < count.

        Entries below floor * ||f||_1 * max(1, M)^l are set to zero.
        """
        mu = vandermonde_matrix(self.freqs, count) @ self.coeffs
        if floor > 0.0:
            mu[np.abs(mu) < self._moment_scale(count) * floor] = 0.0
        return mu

    def _moment_scale(self, count: int) -> np.ndarray:
        return self.norm_1 * np.power(max(1.0, self.freqs.max_modulus), np.arange(count))

    def vanishing_order(self, count: int, rel_tol: float) -> int:
        """Index of the first moment above rel_tol * ||f||_1 * max(1, M)^l (count if none)."""
        nonzero = np.flatnonzero(np.abs(self.moments(count)) >= rel_tol * self._moment_scale(count))
        return int(nonzero[0]) if nonzero.size else count

    def jet(self, count: int, floor: float = 0.0) -> np.ndarray:
        """f^(l)(0) = F_l * sum_j c_j q_j^l for l < count."""
        return self.F.coefficients(count - 1) * self.moments(count, floor)

    def taylor_coefficients(self, count: int, floor: float = 0.0) -> np.ndarray:
        """f^(l)(0) / l! for l < count."""
        n = np.arange(count)
        return self.jet(count, floor) * np.exp(-gammaln(n + 1))

    def series_order(self, modulus: float, tol: float) -> int:
        """Truncation index for the Taylor series of f on |z| <= modulus."""
        scale = max(1.0, self.F.gamma * self.norm_1)
        return truncation_index(scale, self.freqs.max_modulus * modulus, tol)

    def evaluate_many(self, z, tol: float = DEFAULT_TOL, method: str = "direct") -> np.ndarray:
        """
        Evaluate f at every point of z.

        Args:
            z: Complex points
            tol: Absolute tolerance budget
            method: 'direct' sums c_j F(q_j z); 'series' sums the Taylor series of f
                (accurate for f vanishing to high order at 0)
        """
        z = np.asarray(z, dtype=np.complex128)
        if z.size == 0 or not np.any(self.coeffs):
            return np.zeros(z.shape, dtype=np.complex128)
        if method == "series":
            n_max = self.series_order(float(np.max(np.abs(z))), tol)
            # moments at rounding level are dropped
            terms = self.taylor_coefficients(n_max + 1, floor=ROUNDING_FLOOR * self.m)
            acc = np.zeros(z.shape, dtype=np.complex128)
            for a in terms[::-1]:
                acc = acc * z + a
            return acc
        if method != "direct":
            raise DomainError(f"Unknown evaluation method '{method}'")

        term_tol = tol / (self.m * max(1.0, self.norm_inf))
        values = self.F.evaluate_many(np.multiply.outer(self.freqs.points, z), term_tol)
        return np.tensordot(self.coeffs, values, axes=1)

    def __call__(self, z, tol: float = DEFAULT_TOL):
        values = self.evaluate_many(np.atleast_1d(z), tol)
        return complex(values[0]) if np.ndim(z) == 0 else values

    def as_measure(self):
        """The atomic measure sum_j c_j delta_{q_j}; f is its Laplace transform."""
        from engine.laplace import SpectralMeasure

        return SpectralMeasure.atomic(self.freqs.points, self.coeffs)


class FPolynomialModel(BaseModel):
    """JSON layout of an F-polynomial."""
    F: str
    freqs: List[Tuple[float, float]]
    coeffs: List[Tuple[float, float]]


def fpoly_to_json(f: FPolynomial) -> Dict:
    return FPolynomialModel(F=f.F.label, freqs=complex_pairs(f.freqs.points), coeffs=complex_pairs(f.coeffs)).model_dump()


def fpoly_from_json(data: Dict) -> FPolynomial:
    """Rebuild an F-polynomial; F is looked up in the function registry."""
    model = FPolynomialModel.model_validate(data)
    F = get_function_registry().get(model.F)
    return FPolynomial(FrequencyTuple.from_points(pairs_to_complex(model.freqs)), pairs_to_complex(model.coeffs), F)


def eval_fpoly(f: FPolynomial, z: complex, tol: float = DEFAULT_TOL) -> complex:
    """f(z) with error below tol * (1 + ||f||_1)."""
    return complex(f.evaluate_many(np.array([z], dtype=np.complex128), tol)[0])


def sup_norm_disk(
    f: FPolynomial,
    samples: int = SAMPLING_CONFIG["disk_sup_samples"],
    inflation: float = SAMPLING_CONFIG["sup_inflation"],
    radius: float = 1.0,
) -> float:
    """Sampled maximum of |f| on the circle |z| = radius, times the inflation guard."""
    theta = 2.0 * np.pi * np.arange(samples) / samples
    values = f.evaluate_many(radius * np.exp(1j * theta), tol=1e-16, method="series")
    return float(np.max(np.abs(values))) * inflation


def interpolate(g: HoloFunction, F: EntireFunction, q: FrequencyTuple) -> FPolynomial:
    """
    T_{F,q} g: c_i = sum_k v_ik g_{k-1} / F_{k-1}.

    Conditioning warnings from the inverse are re-emitted with warnings.warn.
    """
    m = q.m
    data = g.derivatives(m) / F.coefficients(m - 1)
    inverse = vdm_inverse(q)
    for warning in inverse.warnings:
        warnings.warn(warning, stacklevel=2)
    return FPolynomial(q, inverse.matrix @ data, F)


def fundamental_fpoly(q: FrequencyTuple, F: EntireFunction, j: int) -> FPolynomial:
    """
    The F-polynomial with f^(k)(0) = delta_kj for 0 <= k < m.

    T_{F,q} g = sum_j g_j * fundamental_fpoly(q, F, j).
    """
    if not 0 <= j < q.m:
        raise DomainError(f"Index {j} out of range 0..{q.m - 1}")
    inverse = vdm_inverse(q)
    for warning in inverse.warnings:
        warnings.warn(warning, stacklevel=2)
    return FPolynomial(q, inverse.matrix[:, j] / F.coefficient(j), F)


@dataclass(frozen=True)
class GammaProfile:
    """log gamma_i(q) for each node and their minimum."""

    gamma_i: np.ndarray
    gamma_min: float


def gamma_profile(q: FrequencyTuple) -> GammaProfile:
    """gamma_i(q) = prod_{j != i} |q_i - q_j|, all in log scale."""
    logs = np.array([p.log_mag for p in node_products(q.points)])
    return GammaProfile(gamma_i=logs, gamma_min=float(np.min(logs)))


def error_bound(
    g: HoloFunction,
    q: FrequencyTuple,
    F: EntireFunction,
    z: complex,
    r: float,
    samples: int = SAMPLING_CONFIG["disk_sup_samples"],
    inflation: float = SAMPLING_CONFIG["sup_inflation"],
) -> float:
    """
    Upper bound for |g(z) - T_{F,q} g(z)|:

        (|z|/r)^m * (r/(r-|z|) + Gamma*exp(2*M*r)) * max_{|w|=r} |g(w)|

    Raises:
        DomainError: Unless |z| < r < g.radius
    """
    modulus = abs(complex(z))
    if not modulus < r:
        raise DomainError(f"Need |z| < r, got |z|={modulus:g}, r={r:g}")
    if not r < g.radius:
        raise DomainError(f"Need r < radius {g.radius:g} of '{g.label}', got r={r:g}")
    if modulus == 0.0:
        return 0.0

    theta = 2.0 * np.pi * np.arange(samples) / samples
    g_max = float(np.max(np.abs(g.evaluate(r * np.exp(1j * theta))))) * inflation
    M = q.max_modulus
    log_bound = (
        q.m * (math.log(modulus) - math.log(r))
        + float(np.logaddexp(math.log(r / (r - modulus)), math.log(F.gamma) + 2.0 * M * r))
        + math.log(g_max)
    )
    return math.exp(log_bound) if log_bound < 709.0 else math.inf


def _log_term_count(m: int, j: int, k: int) -> float:
    if j == m - 1:
        return float(gammaln(k + 1) - gammaln(m) - gammaln(k - m + 2))
    return float(gammaln(k + 1) - gammaln(j + 1) - gammaln(m - j) - gammaln(k - m + 1) - math.log(k - j))


@dataclass(frozen=True)
class ErrorDecomposition:
    """g(z) - T g(z) split into the Taylor remainder and the Schur term."""

    remainder: complex
    schur_term: complex
    total: complex


def error_decomposition(
    g: HoloFunction,
    F: EntireFunction,
    q: FrequencyTuple,
    z: complex,
    tol: float = 1e-14,
    k_extra_max: int = 400,
) -> ErrorDecomposition:
    """
    R_m g(z) = sum_{k>=m} g_k z^k / k!
    S_m g(z) = sum_{j<m} (-1)^(m+j) (g_j/F_j) sum_{k>=m} F_k z^k/k! * schur_ratio(q, j, k)

    The k-series stops once the majorant Gamma |z|^k/k! * count(m,j,k) * M^(k-j)
    of every j drops below tol.
    """
    m = q.m
    z = complex(z)
    modulus = abs(z)
    if modulus >= g.radius:
        raise DomainError(f"|z| must be below the radius {g.radius:g} of '{g.label}'")

    head = g.taylor_normalized(m)
    remainder = complex(g.evaluate(z)) - complex(np.polyval(head[::-1], z))

    if modulus == 0.0:
        return ErrorDecomposition(remainder, 0j, remainder)

    weights = g.derivatives(m) / F.coefficients(m - 1)
    M = max(q.max_modulus, 1e-300)
    log_tol = math.log(tol)
    k_stop = m
    while k_stop < m + k_extra_max:
        log_base = k_stop * math.log(modulus) - float(gammaln(k_stop + 1)) + math.log(F.gamma)
        majorant = max(log_base + _log_term_count(m, j, k_stop) + (k_stop - j) * math.log(M) for j in range(m))
        if k_stop > m + 2.0 * M * modulus and majorant < log_tol:
            break
        k_stop += 1

    ratios = schur_ratio_table(q, k_stop - 1)
    k = np.arange(m, k_stop)
    Fk_terms = F.coefficients(k_stop - 1)[m:] * np.exp(k * np.log(z) - gammaln(k + 1))
    signs = np.array([1.0 if (m + j) % 2 == 0 else -1.0 for j in range(m)])
    schur_term = complex(Fk_terms @ ratios @ (signs * weights))

    return ErrorDecomposition(remainder, schur_term, remainder + schur_term)


def extremal_fpoly(q: FrequencyTuple, F: EntireFunction) -> FPolynomial:
    """
    c_j = (-1)^(m+j) * alpha * det A_{m-1}(q^j), alpha = gamma(q)/|det A_m(q)|.

    |c_j| = gamma(q)/gamma_j(q), so ||f||_inf = 1, and f vanishes to order m-1 at 0.
    """
    m = q.m
    if m == 1:
        return FPolynomial(q, np.ones(1), F)
    profile = gamma_profile(q)
    coeffs = np.empty(m, dtype=np.complex128)
    for i in range(m):
        sign = 1.0 if (m + i + 1) % 2 == 0 else -1.0
        phase = vdm_det_deleted(q, i).phase
        coeffs[i] = sign * math.exp(profile.gamma_min - profile.gamma_i[i]) * complex(math.cos(phase), math.sin(phase))
    return FPolynomial(q, coeffs, F)


@dataclass(frozen=True)
class TQBounds:
    """
    Log-scale brackets for the operator norm t(q) and the extremal value eps(q):

        (m-1)!/(Gamma gamma) <= t(q) <= e^M (m-1)!/gamma
        e^-M gamma/(m-1)! <= eps(q) <= Gamma e^M gamma/(m-1)!
    """

    m: int
    M: float
    log_gamma: float
    log_t_lower: float
    log_t_upper: float
    log_eps_lower: float
    log_eps_upper: float

    def linear(self, limit: float = NUMERICS_CONFIG["linear_log_limit"]) -> Dict[str, Optional[float]]:
        """Linear-scale view; entries whose |log| reaches the limit are None."""
        names = ("t_lower", "t_upper", "eps_lower", "eps_upper")
        values = (self.log_t_lower, self.log_t_upper, self.log_eps_lower, self.log_eps_upper)
        return {name: (math.exp(v) if abs(v) < limit else None) for name, v in zip(names, values)}


def tq_bounds(q: FrequencyTuple, F: EntireFunction) -> TQBounds:
    m = q.m
    M = q.max_modulus
    log_gamma = gamma_profile(q).gamma_min
    log_fact = math.lgamma(m)
    log_G = math.log(F.gamma)
    return TQBounds(
        m=m,
        M=M,
        log_gamma=log_gamma,
        log_t_lower=log_fact - log_G - log_gamma,
        log_t_upper=M + log_fact - log_gamma,
        log_eps_lower=-M + log_gamma - log_fact,
        log_eps_upper=log_G + M + log_gamma - log_fact,
    )
