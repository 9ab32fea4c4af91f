"""
Laplace transforms of measures and their F-polynomial interpolants.

For a compactly supported measure mu, L_F mu(z) = int F(z zeta) d mu(zeta). Its
interpolant on nodes Q_m has coefficients int l_i(Q_m, zeta) d mu(zeta) with the
Lagrange basis l_i. Measures are atomic or densities chi on the unit circle given
by Fourier coefficients (d mu = chi(e^{i theta}) d theta).
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ValidationError
from scipy import integrate
from scipy.special import gammaln

from config import LAPLACE_CONFIG, NUMERICS_CONFIG, SAMPLING_CONFIG
from engine.interpolation import FPolynomial, interpolate
from engine.vandermonde import FrequencyTuple, node_products
from errors import AbsHypothesisViolated, ConfigError, DomainError, QuadratureNonConvergent
from series.series_core import EntireFunction, HoloFunction
from utils.parallel import ordered_map
from utils.serialization import complex_pairs

logger = logging.getLogger(__name__)

QUAD_POINTS = SAMPLING_CONFIG["circle_quadrature_points"]
POWER_SUM_BRANCH = 1e-2

Pair = Tuple[float, float]


class AtomModel(BaseModel):
    loc: Pair
    mass: Pair


class SpectralMeasureModel(BaseModel):
    """JSON layout: atomic {"atoms": [...]} or fourier {"coeffs": {"-3": [re, im]}}."""
    kind: Literal["atomic", "fourier"]
    atoms: List[AtomModel] = []
    coeffs: Dict[int, Pair] = {}
    tail_bound: Optional[float] = None


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """
    Complex measure: atomic (distinct locations with complex masses) or a
    circle density with finitely many Fourier coefficients chi_hat(n).

    `tail_bound` bounds sum |chi_hat(n)| over coefficients left out of `fourier`.
    """

    kind: str
    locations: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.complex128))
    masses: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.complex128))
    fourier: Dict[int, complex] = field(default_factory=dict)
    tail_bound: Optional[float] = None

    @classmethod
    def atomic(cls, locations: Sequence[complex], masses: Sequence[complex]) -> "SpectralMeasure":
        locations = np.asarray(locations, dtype=np.complex128).reshape(-1)
        masses = np.asarray(masses, dtype=np.complex128).reshape(-1)
        if locations.size != masses.size:
            raise DomainError("Atom locations and masses differ in length")
        if np.unique(locations).size != locations.size:
            raise DomainError("Atom locations must be distinct")
        return cls("atomic", locations=locations, masses=masses)

    @classmethod
    def dirac(cls, location: complex, mass: complex = 1.0) -> "SpectralMeasure":
        return cls.atomic([location], [mass])

    @classmethod
    def circle_density(cls, fourier: Dict[int, complex], tail_bound: Optional[float] = None) -> "SpectralMeasure":
        coeffs = {int(n): complex(c) for n, c in fourier.items() if c != 0}
        if tail_bound is not None and tail_bound < 0:
            raise DomainError("Tail bound must be non-negative")
        return cls("circle_density", fourier=coeffs, tail_bound=tail_bound)

    @classmethod
    def from_json(cls, source: Union[str, Path, Dict]) -> "SpectralMeasure":
        """
        Raises:
            ConfigError: If the description is missing or malformed
        """
        try:
            if isinstance(source, dict):
                model = SpectralMeasureModel.model_validate(source)
            else:
                model = SpectralMeasureModel.model_validate_json(Path(source).read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            raise ConfigError(f"Invalid measure description: {e}", reason="bad_measure") from e
        if model.kind == "atomic":
            return cls.atomic(
                [complex(*a.loc) for a in model.atoms], [complex(*a.mass) for a in model.atoms]
            )
        return cls.circle_density({n: complex(*c) for n, c in model.coeffs.items()}, model.tail_bound)

    def to_json(self) -> Dict:
        if self.kind == "atomic":
            atoms = [AtomModel(loc=l, mass=w) for l, w in zip(complex_pairs(self.locations), complex_pairs(self.masses))]
            return SpectralMeasureModel(kind="atomic", atoms=atoms).model_dump()
        coeffs = {n: (c.real, c.imag) for n, c in sorted(self.fourier.items())}
        return SpectralMeasureModel(kind="fourier", coeffs=coeffs, tail_bound=self.tail_bound).model_dump()

    @property
    def is_atomic(self) -> bool:
        return self.kind == "atomic"

    @property
    def support(self) -> int:
        """Largest |n| with a nonzero Fourier coefficient."""
        return max((abs(n) for n in self.fourier), default=0)

    def density_values(self, count: int = QUAD_POINTS) -> np.ndarray:
        """chi(e^{i theta_k}) at theta_k = 2 pi k / count, by FFT."""
        size = count
        while self.support >= size // 2:
            size *= 2
        spectrum = np.zeros(size, dtype=np.complex128)
        for n, c in self.fourier.items():
            spectrum[n % size] += c
        values = size * np.fft.ifft(spectrum)
        return values[:: size // count]

    def moment(self, n: int) -> complex:
        """int zeta^n d mu."""
        if self.is_atomic:
            return complex(np.sum(self.masses * self.locations ** n))
        return 2.0 * math.pi * self.fourier.get(-n, 0j)

    def moments(self, count: int) -> np.ndarray:
        if self.is_atomic:
            return np.power.outer(self.locations, np.arange(count)).T @ self.masses
        return np.array([self.moment(n) for n in range(count)], dtype=np.complex128)

    @property
    def total_variation(self) -> float:
        """|mu|(K): sum |mass|, or 8192-point quadrature of |chi| times the 1.005 guard."""
        if self.is_atomic:
            return float(np.sum(np.abs(self.masses)))
        values = self.density_values(QUAD_POINTS)
        return float(2.0 * math.pi * np.mean(np.abs(values))) * SAMPLING_CONFIG["total_variation_inflation"]


def _circle_points(count: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) / count)


def laplace_transform(mu: SpectralMeasure, F: EntireFunction, z: complex, tol: float = NUMERICS_CONFIG["default_tol"]) -> complex:
    """
    L_F mu(z) = int F(z zeta) d mu(zeta).

    Densities use the trapezoid rule on 8192 circle points checked against 16384.

    Raises:
        QuadratureNonConvergent: If doubling the points moves the result by more than tol
    """
    z = complex(z)
    if mu.is_atomic:
        term_tol = tol / (max(1, mu.masses.size) * max(1.0, float(np.max(np.abs(mu.masses), initial=0.0))))
        return complex(np.sum(mu.masses * F.evaluate_many(mu.locations * z, term_tol)))

    def trapezoid(count: int) -> Tuple[complex, float]:
        values = F.evaluate_many(z * _circle_points(count), tol) * mu.density_values(count)
        return complex(2.0 * math.pi * np.mean(values)), float(2.0 * math.pi * np.mean(np.abs(values)))

    (coarse, _), (fine, size) = trapezoid(QUAD_POINTS), trapezoid(2 * QUAD_POINTS)
    if abs(fine - coarse) > tol * max(1.0, size):
        raise QuadratureNonConvergent(f"Laplace quadrature at z={z}: |difference| = {abs(fine - coarse):.3e}")
    return fine


def laplace_holo(mu: SpectralMeasure, F: EntireFunction) -> HoloFunction:
    """L_F mu as a test function: g_n = F_n int zeta^n d mu, entire."""

    def rule(n):
        n = np.asarray(n)
        count = int(n.max()) + 1 if n.size else 0
        data = F.coefficients(count - 1) * mu.moments(count)
        return data[n] * np.exp(-gammaln(n + 1))

    def evaluator(z):
        return np.array([laplace_transform(mu, F, w) for w in np.atleast_1d(z)], dtype=np.complex128)

    return HoloFunction(rule, math.inf, evaluator, label=f"laplace:{F.label}")


class LagrangeSystem:
    """Lagrange basis l_i(Q_m, zeta) of the nodes."""

    def __init__(self, nodes: FrequencyTuple):
        self.nodes = nodes
        products = node_products(nodes.points)
        self._log_w = np.array([-p.log_mag - 1j * p.phase for p in products])
        self._scale = 1.0 + nodes.max_modulus

    def weights(self, zeta) -> np.ndarray:
        """
        (l_1(zeta), ..., l_m(zeta)); shape (m,) for a scalar, (len, m) for an array.

        Computed as exp(sum_j log(zeta - q_j) - log(zeta - q_i) + log w_i); a zeta
        within 1e-15 of a node returns the matching unit vector.
        """
        scalar = np.ndim(zeta) == 0
        zeta = np.atleast_1d(np.asarray(zeta, dtype=np.complex128))
        nodes = self.nodes.points
        diff = zeta[:, None] - nodes[None, :]
        hits = np.abs(diff) <= 1e-15 * self._scale
        safe = np.where(hits, 1.0, diff)
        log_diff = np.log(safe)
        log_full = np.sum(log_diff, axis=1, keepdims=True)
        out = np.exp(log_full - log_diff + self._log_w[None, :])

        hit_rows = np.flatnonzero(hits.any(axis=1))
        for row in hit_rows:
            out[row] = hits[row].astype(np.complex128)
        return out[0] if scalar else out


def lagrange_integrals(mu: SpectralMeasure, nodes: FrequencyTuple, tol: float = 1e-10) -> np.ndarray:
    """
    int l_i(Q_m, zeta) d mu(zeta) for every node.

    Raises:
        QuadratureNonConvergent: If the density quadrature fails its doubling check
    """
    system = LagrangeSystem(nodes)
    if mu.is_atomic:
        if mu.masses.size == 0:
            return np.zeros(nodes.m, dtype=np.complex128)
        return mu.masses @ system.weights(mu.locations)

    def trapezoid(count: int) -> np.ndarray:
        values = mu.density_values(count)
        return 2.0 * math.pi * (values @ system.weights(_circle_points(count))) / count

    coarse, fine = trapezoid(QUAD_POINTS), trapezoid(2 * QUAD_POINTS)
    gap = float(np.max(np.abs(fine - coarse)))
    if gap > tol * max(1.0, float(np.max(np.abs(fine)))):
        raise QuadratureNonConvergent(f"Lagrange integrals: doubling changed the result by {gap:.3e}")
    return fine


def interpolate_laplace(mu: SpectralMeasure, F: EntireFunction, nodes: FrequencyTuple) -> FPolynomial:
    """T_{F,Q_m}(L_F mu) with coefficients int l_i d mu."""
    return FPolynomial(nodes, lagrange_integrals(mu, nodes), F)


def lambda_functional(mu: SpectralMeasure, nodes: FrequencyTuple) -> float:
    """Lambda(Q_m, mu) = sum_j |int l_j d mu|."""
    return float(np.sum(np.abs(lagrange_integrals(mu, nodes))))


def roots_of_unity_lagrange(m: int, zeta: complex, rotation: float = 0.0) -> np.ndarray:
    """
    l_j(Q_m, zeta) for zeta_j = exp(2 pi i j/m + i rotation), j = 1..m:

        l_j(zeta) = (u^m - 1) / (m (u - 1)),  u = zeta / zeta_j

    Near u = 1 the power sum (1 + u + ... + u^(m-1))/m is used instead.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    j = np.arange(1, m + 1) % m
    u = complex(zeta) * np.exp(-1j * (2.0 * np.pi * j / m + rotation))
    out = np.empty(m, dtype=np.complex128)
    near = np.abs(u - 1.0) < POWER_SUM_BRANCH
    far = ~near
    out[far] = (u[far] ** m - 1.0) / (m * (u[far] - 1.0))
    for index in np.flatnonzero(near):
        acc = 0j
        for _ in range(m):
            acc = acc * u[index] + 1.0
        out[index] = acc / m
    return out


def shifted_roots(m: int) -> FrequencyTuple:
    """The m-th roots of (-1)^m; the set always contains -1."""
    return FrequencyTuple.roots_of_unity(m, rotation=_shift(m))


def _shift(m: int) -> float:
    return math.pi / m if m % 2 else 0.0


def dirac_example_lambda(m: int, shifted: bool = False) -> float:
    """Lambda(Q_m, delta_{-1}) for roots of unity, or for the shifted roots when `shifted`."""
    rotation = _shift(m) if shifted else 0.0
    return float(np.sum(np.abs(roots_of_unity_lagrange(m, -1.0, rotation))))


def dirac_example(m_max: int) -> List[Dict]:
    """Rows (m, lambda, lambda_shifted) for delta_{-1}, m = 1..m_max."""
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    rows = ordered_map(
        lambda m: {"m": m, "lambda": dirac_example_lambda(m), "lambda_shifted": dirac_example_lambda(m, shifted=True)},
        range(1, m_max + 1),
    )
    logger.info(f"Dirac example table: {len(rows)} rows")
    return rows


def _nonpositive_part(chi: SpectralMeasure) -> np.ndarray:
    """a_n = chi_hat(-n) for n = 0..support."""
    a = np.zeros(chi.support + 1, dtype=np.complex128)
    for n, c in chi.fourier.items():
        if n <= 0:
            a[-n] = c
    return a


def _abs_minus_integral(a: np.ndarray, count: int = QUAD_POINTS) -> float:
    size = count
    while a.size >= size // 2:
        size *= 2
    values = np.fft.fft(a, n=size)
    return float(2.0 * math.pi * np.mean(np.abs(values)))


def lambda_limit_abs(chi: SpectralMeasure, m_list: Sequence[int]) -> List[Dict]:
    """
    Lambda(Q_m, chi) on roots of unity against the limit int |chi^-| d theta.

    int l_j chi d theta = (2 pi/m) chi_m^-(zeta_j), with chi_m^- the partial sum of
    the nonpositive-frequency part, so Lambda = (2 pi/m) sum_j |fft(a)_j|.

    Raises:
        DomainError: If chi is not a circle density
        AbsHypothesisViolated: If chi has no tail bound and its support exceeds the cap
    """
    if chi.is_atomic:
        raise DomainError("lambda_limit_abs needs a circle density")
    cap = LAPLACE_CONFIG["fourier_support_cap"]
    if chi.tail_bound is None and chi.support > cap:
        raise AbsHypothesisViolated(
            f"Fourier support {chi.support} exceeds {cap} and no tail bound was supplied",
            reason="abs_hypothesis",
        )

    a = _nonpositive_part(chi)
    limit = _abs_minus_integral(a)
    tail = chi.tail_bound or 0.0

    def row(m: int) -> Dict:
        partial = np.zeros(m, dtype=np.complex128)
        used = min(m, a.size)
        partial[:used] = a[:used]
        # fft index k corresponds to zeta_k; the set of nodes is the same
        lam = float(2.0 * math.pi / m * np.sum(np.abs(np.fft.fft(partial))))
        omitted = float(np.sum(np.abs(a[m:]))) if a.size > m else 0.0
        return {
            "m": m,
            "lambda": lam,
            "limit": limit,
            "gap": abs(lam - limit),
            "correction_bound": 2.0 * math.pi * (omitted + tail),
        }

    rows = ordered_map(row, sorted(set(int(m) for m in m_list)))
    logger.info(f"Fourier limit table: {len(rows)} rows, limit={limit:.6f}")
    return rows


@dataclass(frozen=True)
class ChiRRow:
    r: float
    m: int
    lam: float
    l1_norm_chi: float
    l1_norm_chi_minus: float
    converged: bool


def _quad_abs(func, limit: int, tol: float) -> Tuple[float, bool]:
    result = integrate.quad(func, -math.pi, math.pi, points=[0.0], limit=limit, epsabs=tol, epsrel=tol, full_output=1)
    value, abserr = result[0], result[1]
    converged = len(result) < 4 and abserr <= 10.0 * tol * max(1.0, abs(value))
    return float(value), converged


def chi_r_family(r: float, m: int) -> ChiRRow:
    """
    chi_r(e^{i theta}) = 2 Re 1/(1 - r e^{i theta}), chi_r^-(e^{i theta}) = 1 + 1/(1 - r e^{-i theta}).

    Lambda(Q_m, chi_r) uses chi_m^-(zeta_j) = 1 + (1 - r^m)/(1 - r conj(zeta_j)); the two
    L1 norms come from adaptive quadrature refined at theta = 0. Non-convergence is
    flagged in the row.
    """
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r}")
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")

    zeta = FrequencyTuple.roots_of_unity(m).points
    partial = 1.0 + (1.0 - r ** m) / (1.0 - r * np.conj(zeta))
    lam = float(2.0 * math.pi / m * np.sum(np.abs(partial)))

    limit = LAPLACE_CONFIG["quad_limit"]
    tol = LAPLACE_CONFIG["quad_tol"]
    chi_norm, ok_chi = _quad_abs(
        lambda t: abs(2.0 * (1.0 - r * math.cos(t)) / (1.0 - 2.0 * r * math.cos(t) + r * r)), limit, tol
    )
    minus_norm, ok_minus = _quad_abs(lambda t: abs(1.0 + 1.0 / (1.0 - r * complex(math.cos(t), -math.sin(t)))), limit, tol)
    converged = ok_chi and ok_minus
    if not converged:
        logger.warning(f"chi_r quadrature not converged for r={r}")
    return ChiRRow(r=r, m=m, lam=lam, l1_norm_chi=chi_norm, l1_norm_chi_minus=minus_norm, converged=converged)


def random_unit_measure(rng: np.random.Generator, atoms: int) -> SpectralMeasure:
    """Atomic measure on the unit circle with random phases and total variation 1."""
    locations = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, atoms))
    weights = rng.uniform(0.1, 1.0, atoms)
    masses = weights / weights.sum() * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, atoms))
    return SpectralMeasure.atomic(locations, masses)


def atomic_bound_experiment(
    F: EntireFunction, m_list: Sequence[int], trials: int = 50, seed: int = 0, atoms: int = 5
) -> List[Dict]:
    """
    For random unit-variation atomic measures on the circle and roots-of-unity nodes:
    ||T_{F,Q_m}(L_F mu)||_inf against |mu|(K), plus the gap between the Lagrange
    coefficients and the Vandermonde interpolant of the Taylor data.
    """
    rows = []
    for m in sorted(set(int(m) for m in m_list)):
        nodes = FrequencyTuple.roots_of_unity(m)
        rng = np.random.default_rng([seed, m])
        for trial in range(trials):
            mu = random_unit_measure(rng, atoms)
            lagrange = interpolate_laplace(mu, F, nodes)
            vandermonde = interpolate(laplace_holo(mu, F), F, nodes)
            gap = float(np.max(np.abs(lagrange.coeffs - vandermonde.coeffs)))
            rows.append({
                "m": m,
                "trial": trial,
                "norm_inf": lagrange.norm_inf,
                "total_variation": mu.total_variation,
                "two_path_gap": gap,
            })
    logger.info(f"Atomic bound table: {len(rows)} rows")
    return rows
