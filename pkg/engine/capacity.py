"""
Fekete points, transfinite diameter and exponential capacity.

Compact sets are described by CompactSetDescriptor. Fekete tuples are exact
roots of unity on circles and disks, and grid-restricted Leja + exchange local
optima elsewhere; the achieved log|det| is always reported as found.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator
from scipy.special import comb

from config import FEKETE_CONFIG
from engine.interpolation import gamma_profile, tq_bounds
from engine.vandermonde import FrequencyTuple, vdm_det
from errors import ConfigError, DomainError, GridTooCoarse
from series.series_core import EntireFunction
from utils.parallel import ordered_map

logger = logging.getLogger(__name__)

Pair = Tuple[float, float]


def _as_pair(value) -> Pair:
    if isinstance(value, (int, float)):
        return (float(value), 0.0)
    if isinstance(value, complex):
        return (value.real, value.imag)
    if isinstance(value, str):
        c = complex(value.replace(" ", ""))
        return (c.real, c.imag)
    re, im = value
    return (float(re), float(im))


class CompactSetDescriptor(BaseModel):
    """Compact set K: disk(R), circle(R), segment(a, b), polygon(vertices) or cloud(points)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["disk", "circle", "segment", "polygon", "cloud"]
    R: float = 1.0
    a: Pair = (-1.0, 0.0)
    b: Pair = (1.0, 0.0)
    vertices: Tuple[Pair, ...] = ()
    points: Tuple[Pair, ...] = ()

    @field_validator("a", "b", mode="before")
    @classmethod
    def _endpoint(cls, value):
        return _as_pair(value)

    @field_validator("vertices", "points", mode="before")
    @classmethod
    def _point_list(cls, value):
        return tuple(_as_pair(v) for v in value)

    @field_validator("R")
    @classmethod
    def _positive_radius(cls, value):
        if value <= 0:
            raise ValueError("R must be positive")
        return value

    @classmethod
    def parse(cls, text: str) -> "CompactSetDescriptor":
        """
        Parse the short form 'circle:1', 'disk:2', 'segment:-1,1', 'polygon:0,1,1j', 'cloud:...'.

        Raises:
            ConfigError: On an unknown kind or bad parameters
        """
        kind, _, arg = text.partition(":")
        values = [v for v in arg.split(",") if v.strip()]
        try:
            if kind in ("circle", "disk"):
                return cls(kind=kind, R=float(values[0]) if values else 1.0)
            if kind == "segment":
                if len(values) != 2:
                    raise ValueError("segment needs two endpoints")
                return cls(kind=kind, a=values[0], b=values[1])
            if kind == "polygon":
                if len(values) < 3:
                    raise ValueError("polygon needs at least three vertices")
                return cls(kind=kind, vertices=values)
            if kind == "cloud":
                if not values:
                    raise ValueError("cloud needs at least one point")
                return cls(kind=kind, points=values)
        except (ValueError, ValidationError) as e:
            raise ConfigError(f"Bad compact set '{text}': {e}", reason="bad_set") from e
        raise ConfigError(f"Unknown compact set kind '{kind}'", reason="bad_set")

    @classmethod
    def from_json(cls, source: Union[str, Path, Dict]) -> "CompactSetDescriptor":
        """Load from a dict or a JSON file such as {"kind": "circle", "R": 1.0}."""
        try:
            if isinstance(source, dict):
                return cls.model_validate(source)
            return cls.model_validate_json(Path(source).read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            raise ConfigError(f"Invalid compact set description: {e}", reason="bad_set") from e

    def _complex(self, pairs: Sequence[Pair]) -> np.ndarray:
        return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)

    @property
    def endpoints(self) -> Tuple[complex, complex]:
        return complex(*self.a), complex(*self.b)

    @property
    def M(self) -> float:
        """Radius of the smallest origin-centered disk containing K."""
        if self.kind in ("circle", "disk"):
            return self.R
        if self.kind == "segment":
            return max(abs(z) for z in self.endpoints)
        pts = self._complex(self.vertices if self.kind == "polygon" else self.points)
        return float(np.max(np.abs(pts)))

    @property
    def d_known(self) -> Optional[float]:
        """Classical transfinite diameter where known."""
        if self.kind in ("circle", "disk"):
            return self.R
        if self.kind == "segment":
            a, b = self.endpoints
            return abs(b - a) / 4.0
        return None

    def boundary_grid(self, n: int) -> np.ndarray:
        """n boundary samples (a cloud returns its own points)."""
        if self.kind in ("circle", "disk"):
            return self.R * np.exp(2j * np.pi * np.arange(n) / n)
        if self.kind == "segment":
            a, b = self.endpoints
            return a + (b - a) * np.linspace(0.0, 1.0, n)
        if self.kind == "cloud":
            return self._complex(self.points)

        vertices = self._complex(self.vertices)
        closed = np.append(vertices, vertices[0])
        edges = np.diff(closed)
        lengths = np.abs(edges)
        cumulative = np.concatenate(([0.0], np.cumsum(lengths)))
        s = cumulative[-1] * np.arange(n) / n
        edge = np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, len(edges) - 1)
        t = (s - cumulative[edge]) / lengths[edge]
        return closed[edge] + t * edges[edge]

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n random points of K (uniform area measure for the disk)."""
        if self.kind == "disk":
            return self.R * np.sqrt(rng.uniform(0.0, 1.0, n)) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))
        if self.kind == "circle":
            return self.R * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))
        if self.kind == "segment":
            a, b = self.endpoints
            return a + (b - a) * rng.uniform(0.0, 1.0, n)
        if self.kind == "cloud":
            pts = self._complex(self.points)
            return pts[rng.integers(0, pts.size, n)]
        grid = self.boundary_grid(4096)
        return grid[rng.integers(0, grid.size, n)]


def default_grid(m: int) -> int:
    return max(FEKETE_CONFIG["min_grid"], FEKETE_CONFIG["grid_per_point"] * m)


@dataclass
class FeketeSearch:
    """Result of one Fekete search; history holds log|det| after start and after each pass."""

    points: FrequencyTuple
    logdet: float
    history: List[float]
    method: str


def _leja(grid: np.ndarray, m: int) -> List[int]:
    chosen = [int(np.argmax(np.abs(grid)))]
    score = np.zeros(grid.size)
    with np.errstate(divide="ignore"):
        for _ in range(m - 1):
            score += np.log(np.abs(grid - grid[chosen[-1]]))
            score[chosen] = -np.inf
            chosen.append(int(np.argmax(score)))
    return chosen


def _logdet(points: np.ndarray) -> float:
    i, j = np.triu_indices(points.size, k=1)
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log(np.abs(points[j] - points[i]))))


def fekete_search_detailed(
    K: CompactSetDescriptor,
    m: int,
    grid_n: Optional[int] = None,
    seed: int = 0,
    max_passes: Optional[int] = None,
) -> FeketeSearch:
    """
    Approximate Fekete m-tuple of K.

    Circles and disks get exact scaled roots of unity. Other sets get a greedy
    Leja start on the boundary grid (first point of largest modulus), then
    single-point exchange passes until no position improves or the pass limit
    is hit. Ties go to the lowest grid index; the seed fixes the order in which
    positions are visited.

    Raises:
        DomainError: If the grid is smaller than 4m
        GridTooCoarse: If the result violates the separation guard
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if K.kind in ("circle", "disk"):
        q = FrequencyTuple.roots_of_unity(m, K.R)
        logdet = vdm_det(q).log_mag
        return FeketeSearch(q, logdet, [logdet], "exact_roots_of_unity")

    grid_n = default_grid(m) if grid_n is None else grid_n
    grid = K.boundary_grid(grid_n)
    if K.kind == "cloud":
        if grid.size < m:
            raise DomainError(f"Cloud has {grid.size} points, need {m}")
    elif grid_n < 4 * m:
        raise DomainError(f"grid_n={grid_n} must be at least 4m={4 * m}", reason="grid_too_small")

    max_passes = FEKETE_CONFIG["max_passes"] if max_passes is None else max_passes
    idx = _leja(grid, m)
    history = [_logdet(grid[idx])]
    rng = np.random.default_rng(seed)

    with np.errstate(divide="ignore"):
        # column p: log distances from every grid point to chosen point p
        D = np.log(np.abs(grid[:, None] - grid[None, idx]))
        for _ in range(max_passes):
            improved = False
            for p in rng.permutation(m):
                others = np.delete(D, p, axis=1).sum(axis=1)
                current = others[idx[p]]
                best = int(np.argmax(others))
                if best != idx[p] and others[best] > current + 1e-12 * (1.0 + abs(current)):
                    idx[p] = best
                    D[:, p] = np.log(np.abs(grid - grid[best]))
                    improved = True
            history.append(_logdet(grid[idx]))
            if not improved:
                break

    try:
        q = FrequencyTuple.from_points(grid[idx])
    except DomainError as e:
        raise GridTooCoarse(f"Fekete search on a {grid_n}-point grid for m={m}: {e}") from e
    logger.debug(f"Fekete search m={m}: logdet={history[-1]:.6f} after {len(history) - 1} passes")
    return FeketeSearch(q, history[-1], history, "leja_exchange")


def fekete_search(K: CompactSetDescriptor, m: int, grid_n: Optional[int] = None, seed: int = 0) -> FrequencyTuple:
    return fekete_search_detailed(K, m, grid_n, seed).points


@dataclass
class FeketeArray:
    """Fekete tuples for several m with their log|det A_m|."""

    per_m: Dict[int, FrequencyTuple] = field(default_factory=dict)
    vdm_log: Dict[int, float] = field(default_factory=dict)
    method: str = "leja_exchange"

    def csv_rows(self) -> List[Dict]:
        rows = []
        for m in sorted(self.per_m):
            for index, z in enumerate(self.per_m[m].points):
                rows.append({"m": m, "point_index": index, "re": z.real, "im": z.imag, "logdet": self.vdm_log[m]})
        return rows


def fekete_array(
    K: CompactSetDescriptor, m_values: Sequence[int], grid_n: Optional[int] = None, seed: int = 0
) -> FeketeArray:
    m_values = sorted(set(int(m) for m in m_values))
    grid_n = default_grid(max(m_values)) if grid_n is None else grid_n
    searches = ordered_map(lambda m: fekete_search_detailed(K, m, grid_n, seed), m_values)
    array = FeketeArray(method=searches[0].method)
    for m, search in zip(m_values, searches):
        array.per_m[m] = search.points
        array.vdm_log[m] = search.logdet
    logger.info(f"Fekete array for {K.kind}: m in [{m_values[0]}, {m_values[-1]}] ({array.method})")
    return array


def vm_sequence(
    K: CompactSetDescriptor, m_max: int, grid_n: Optional[int] = None, seed: int = 0
) -> List[Dict]:
    """
    Rows (m, log_vm, d_raw, d_estimate) for m = 2..m_max.

    d_raw = V_m^(2/(m(m-1))) is the monotone sequence; d_estimate divides out
    the m^(m/2) growth common to all sets (exact for the circle).
    """
    if m_max < 2:
        raise DomainError(f"m_max must be >= 2, got {m_max}")
    array = fekete_array(K, range(2, m_max + 1), grid_n, seed)
    return [diameter_row(array, m) for m in range(2, m_max + 1)]


def diameter_row(array: FeketeArray, m: int) -> Dict:
    """log V_m with d_raw and d_estimate for one m >= 2 of a Fekete array."""
    log_vm = array.vdm_log[m]
    pairs = m * (m - 1)
    return {
        "m": m,
        "log_vm": log_vm,
        "d_raw": math.exp(2.0 * log_vm / pairs),
        "d_estimate": math.exp((2.0 * log_vm - m * math.log(m)) / pairs),
        "method": array.method,
    }


@dataclass(frozen=True)
class ChebyshevBracket:
    """Bracket tau_low <= tau_{m-1} <= tau_high plus the direct Fekete-polynomial estimate."""

    tau_low: float
    tau_high: float
    tau_direct: float


def bracket_from_array(array: FeketeArray, m: int, grid: np.ndarray) -> Tuple[ChebyshevBracket, float]:
    log_prev = array.vdm_log[m - 1]
    prev = array.per_m[m - 1].points
    log_poly = np.sum(np.log(np.maximum(np.abs(grid[:, None] - prev[None, :]), 1e-300)), axis=1)
    log_direct = float(np.max(log_poly))
    # previous tuple plus its polynomial's maximizer is itself an m-tuple of K
    log_vm = max(array.vdm_log[m], log_prev + log_direct)
    tau_low = math.exp((log_vm - math.log(m) - log_prev) / (m - 1))
    tau_high = math.exp((log_vm - log_prev) / (m - 1))
    return ChebyshevBracket(tau_low, tau_high, math.exp(log_direct / (m - 1))), log_vm


def chebyshev_bracket(
    K: CompactSetDescriptor, m: int, grid_n: Optional[int] = None, seed: int = 0
) -> ChebyshevBracket:
    """
    Bracket for the Chebyshev constant tau_{m-1}:

        (V_m/(m V_{m-1}))^(1/(m-1)) <= tau_{m-1} <= (V_m/V_{m-1})^(1/(m-1))

    with the direct upper estimate ||prod (z - q_j)||^(1/(m-1)) over the boundary
    grid for the Fekete (m-1)-tuple.
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    grid_n = default_grid(m) if grid_n is None else grid_n
    array = fekete_array(K, [m - 1, m], grid_n, seed)
    bracket, _ = bracket_from_array(array, m, K.boundary_grid(grid_n))
    return bracket


def capacity_limits(
    K: CompactSetDescriptor,
    F: EntireFunction,
    m_max: int,
    grid_n: Optional[int] = None,
    seed: int = 0,
    m_values: Optional[Sequence[int]] = None,
) -> List[Dict]:
    """
    Per m: the eps_m bracket

        e^-M tau_{m-1}^{m-1} / (m-1)!  <=  eps_m  <=  Gamma e^M V_m^(2/m) / (m-1)!

    in log scale, the normalized endpoints m * (endpoint)^(1/m), the
    t(q)eps(q) product bracket of the Fekete tuple and the target e*d(K).
    """
    if m_max < 3:
        raise DomainError(f"m_max must be >= 3, got {m_max}")
    m_values = sorted(set(m_values)) if m_values else list(range(2, m_max + 1))
    needed = sorted(set(m_values) | {m - 1 for m in m_values})
    grid_n = default_grid(max(needed)) if grid_n is None else grid_n
    array = fekete_array(K, needed, grid_n, seed)
    grid = K.boundary_grid(grid_n)
    M = K.M
    log_G = math.log(F.gamma)
    target = exponential_capacity(K)

    rows = []
    for m in m_values:
        bracket, log_vm = bracket_from_array(array, m, grid)
        log_fact = math.lgamma(m)
        log_lower = -M - log_fact + (m - 1) * math.log(bracket.tau_low)
        log_upper = log_G + M + 2.0 * log_vm / m - log_fact
        tq = tq_bounds(array.per_m[m], F)
        rows.append({
            "m": m,
            "log_eps_lower": log_lower,
            "log_eps_upper": log_upper,
            "normalized_lower": m * math.exp(log_lower / m),
            "normalized_upper": m * math.exp(log_upper / m),
            "tq_product_low": math.exp(tq.log_t_lower + tq.log_eps_lower),
            "tq_product_high": math.exp(tq.log_t_upper + tq.log_eps_upper),
            "gamma_e2M": F.gamma * math.exp(2.0 * M),
            "target": target,
        })
    logger.info(f"Capacity table for {K.kind}: {len(rows)} rows")
    return rows


def equilibrium_moments(q: FrequencyTuple, k_max: int) -> np.ndarray:
    """(1/m) sum_i q_i^k for k = 1..k_max."""
    if k_max < 1:
        raise DomainError(f"k_max must be >= 1, got {k_max}")
    powers = np.power.outer(q.points, np.arange(1, k_max + 1))
    return powers.mean(axis=0)


def arcsine_moment(k: int) -> float:
    """k-th moment of the equilibrium (arcsine) measure of [-1, 1]."""
    if k % 2:
        return 0.0
    return float(comb(k, k // 2, exact=True)) / 2.0 ** k


def uniform_circle_moment(k: int) -> float:
    """k-th moment of the normalized arc length on the unit circle."""
    return 1.0 if k == 0 else 0.0


def exponential_capacity(K: CompactSetDescriptor) -> Optional[float]:
    """e * d(K) where d(K) is known."""
    d = K.d_known
    return None if d is None else math.e * d


def gamma_root(q: FrequencyTuple) -> float:
    """gamma(q)^(1/(m-1)), compared with d(K) for Fekete tuples."""
    if q.m < 2:
        raise DomainError("gamma_root needs m >= 2")
    return math.exp(gamma_profile(q).gamma_min / (q.m - 1))
