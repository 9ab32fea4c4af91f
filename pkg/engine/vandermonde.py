"""
Vandermonde machinery: frequency tuples, determinants, the closed-form inverse
and generalized Vandermonde (Schur polynomial) ratios.

Row k of A_m(q) holds the k-th powers (q_1^k, ..., q_m^k), k = 0..m-1.
The generalized matrix A_m^{j,k}(q) drops row j and appends the row of k-th
powers at the bottom; all determinant quantities keep that row order.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from config import NUMERICS_CONFIG
from errors import ConditioningWarning, DomainError
from utils.log_complex import LogComplex

logger = logging.getLogger(__name__)

TABLEAU_MAX_M = 8
TABLEAU_MAX_SPAN = 10
TERM_COUNT_LIMIT = 2 ** 63


@dataclass(frozen=True, eq=False)
class FrequencyTuple:
    """
    Ordered m-tuple of distinct complex frequencies.

    Construction fails when the minimal pairwise distance is below
    guard * (1 + max|q_j|).
    """

    points: np.ndarray
    guard: float = NUMERICS_CONFIG["separation_guard"]
    separation: float = field(init=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.complex128).reshape(-1)
        if pts.size == 0:
            raise DomainError("A frequency tuple needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise DomainError("Frequencies must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

        if pts.size == 1:
            separation = math.inf
        else:
            diff = np.abs(pts[:, None] - pts[None, :])
            np.fill_diagonal(diff, np.inf)
            separation = float(diff.min())
        object.__setattr__(self, "separation", separation)

        limit = self.guard * (1.0 + self.max_modulus)
        if separation <= limit:
            raise DomainError(
                f"Frequencies not separated: min distance {separation:.3e} <= {limit:.3e}",
                reason="frequencies_not_separated",
            )

    @classmethod
    def from_points(cls, points: Sequence[complex], guard: Optional[float] = None) -> "FrequencyTuple":
        if guard is None:
            return cls(np.asarray(points, dtype=np.complex128))
        return cls(np.asarray(points, dtype=np.complex128), guard)

    @classmethod
    def roots_of_unity(cls, m: int, radius: float = 1.0, rotation: float = 0.0) -> "FrequencyTuple":
        """zeta_j = radius * exp(2*pi*i*j/m + i*rotation), j = 1..m (zeta_m = radius when unrotated)."""
        if m < 1:
            raise DomainError(f"m must be >= 1, got {m}")
        j = np.arange(1, m + 1) % m
        return cls(radius * np.exp(1j * (2.0 * np.pi * j / m + rotation)))

    @property
    def m(self) -> int:
        return int(self.points.size)

    @property
    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.points)))

    def deleted(self, i: int) -> np.ndarray:
        """The points with q_i removed (0-based i)."""
        return np.delete(self.points, i)

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"FrequencyTuple(m={self.m}, separation={self.separation:.3g})"


@dataclass
class VandermondeInverse:
    """Inverse matrix plus any conditioning warnings raised while building it."""

    matrix: np.ndarray
    warnings: List[ConditioningWarning] = field(default_factory=list)


def vandermonde_matrix(q: FrequencyTuple, rows: Optional[int] = None) -> np.ndarray:
    """A[k, i] = q_i^k for k < rows (default m)."""
    rows = q.m if rows is None else rows
    return np.power.outer(q.points, np.arange(rows)).T


def _vdm_det_points(points: np.ndarray) -> LogComplex:
    if points.size < 2:
        return LogComplex.one()
    i, j = np.triu_indices(points.size, k=1)
    return LogComplex.product(points[j] - points[i])


def vdm_det(q: FrequencyTuple) -> LogComplex:
    """prod_{i<j} (q_j - q_i) in log scale."""
    return _vdm_det_points(q.points)


def vdm_det_deleted(q: FrequencyTuple, i: int) -> LogComplex:
    """det A_{m-1}(q^i) for the tuple with q_i removed (0-based i)."""
    return _vdm_det_points(q.deleted(i))


def node_products(points: np.ndarray) -> List[LogComplex]:
    """prod_{j != i} (q_i - q_j) for every i, each in log scale."""
    points = np.asarray(points, dtype=np.complex128)
    diff = points[:, None] - points[None, :]
    np.fill_diagonal(diff, 1.0)
    log_mag = np.sum(np.log(np.abs(diff)), axis=1)
    phase = np.sum(np.angle(diff), axis=1)
    return [LogComplex(float(a), float(b)) for a, b in zip(log_mag, phase)]


def elementary_symmetric_all(points: Sequence[complex]) -> np.ndarray:
    """e_0, ..., e_n of the points by the one-pass recurrence e_k <- e_k + x*e_{k-1}."""
    points = np.asarray(points, dtype=np.complex128).reshape(-1)
    e = np.zeros(points.size + 1, dtype=np.complex128)
    e[0] = 1.0
    for count, x in enumerate(points, start=1):
        e[1:count + 1] = e[1:count + 1] + x * e[:count]
    return e


def elementary_symmetric(points: Sequence[complex], l: int) -> complex:
    """
    Elementary symmetric polynomial s_l of the points.

    Raises:
        DomainError: If l is outside 0..len(points)
    """
    points = np.asarray(points, dtype=np.complex128).reshape(-1)
    if not 0 <= l <= points.size:
        raise DomainError(f"Degree {l} out of range 0..{points.size}")
    return complex(elementary_symmetric_all(points)[l])


def complete_homogeneous(q: Sequence[complex], d: int) -> complex:
    """h_d(q) by h_d = sum_{l=1}^{min(d,m)} (-1)^(l-1) e_l h_{d-l}."""
    if d < 0:
        raise DomainError(f"Degree must be >= 0, got {d}")
    e = elementary_symmetric_all(q)
    m = e.size - 1
    h = np.zeros(d + 1, dtype=np.complex128)
    h[0] = 1.0
    for n in range(1, d + 1):
        total = 0j
        for l in range(1, min(n, m) + 1):
            total += (-1) ** (l - 1) * e[l] * h[n - l]
        h[n] = total
    return complex(h[d])


def vdm_inverse(q: FrequencyTuple, cap: Optional[int] = None) -> VandermondeInverse:
    """
    Closed-form inverse of A_m(q).

    v_ik = (-1)^(m-k) s_{m-k}(q without q_i) / prod_{j != i} (q_i - q_j)

    Args:
        q: Frequencies
        cap: Largest m for dense output (default from config)

    Returns:
        VandermondeInverse with the m x m matrix; entries above the
        conditioning limit add a ConditioningWarning

    Raises:
        DomainError: If m exceeds the cap
    """
    cap = NUMERICS_CONFIG["dense_inverse_cap"] if cap is None else cap
    m = q.m
    if m > cap:
        raise DomainError(f"Dense inverse limited to m <= {cap}, got {m}", reason="inverse_too_large")

    signs = np.array([(-1.0) ** (m - k) for k in range(1, m + 1)])
    matrix = np.empty((m, m), dtype=np.complex128)
    with np.errstate(over="ignore"):
        for i, den in enumerate(node_products(q.points)):
            e = elementary_symmetric_all(q.deleted(i))
            # s_{m-k} for k = 1..m
            numer = signs * e[m - np.arange(1, m + 1)]
            scale = math.exp(-den.log_mag) if -den.log_mag < 709.0 else math.inf
            matrix[i] = numer * scale * complex(math.cos(-den.phase), math.sin(-den.phase))

    result = VandermondeInverse(matrix)
    limit = NUMERICS_CONFIG["conditioning_limit"]
    largest = float(np.max(np.abs(matrix)))
    if not largest <= limit:
        message = f"Inverse Vandermonde entry {largest:.3e} exceeds {limit:.0e} (m={m})"
        logger.warning(message)
        result.warnings.append(ConditioningWarning(message))
    return result


def _check_indices(m: int, j: int, k: int):
    if not ((k > m - 1 > j >= 0) or (k >= m - 1 == j)):
        raise DomainError(
            f"Index condition violated: need k > m-1 > j >= 0 or k >= m-1 = j (m={m}, j={j}, k={k})",
            reason="schur_index",
        )


def schur_ratio(q: FrequencyTuple, j: int, k: int) -> LogComplex:
    """
    det A_m^{j,k}(q) / det A_m(q).

    The appended row q^k is eliminated against the rows of A_m by reducing
    x^k modulo P(x) = prod (x - q_i): if x^k = sum_l r_l x^l mod P, the ratio is
    (-1)^(m-1-j) r_j. The remainder is rescaled every step, with the scale
    carried in log form.
    """
    m = q.m
    _check_indices(m, j, k)
    if k == m - 1:
        return LogComplex.one()

    e = elementary_symmetric_all(q.points)
    # P(x) = x^m + sum_{l<m} p_l x^l
    p = np.array([(-1) ** (m - l) * e[m - l] for l in range(m)], dtype=np.complex128)

    r = np.zeros(m, dtype=np.complex128)
    r[m - 1] = 1.0
    log_scale = 0.0
    for _ in range(k - m + 1):
        top = r[m - 1]
        shifted = np.empty_like(r)
        shifted[0] = 0.0
        shifted[1:] = r[:-1]
        r = shifted - top * p
        norm = float(np.max(np.abs(r)))
        if norm == 0.0:
            return LogComplex.zero()
        r /= norm
        log_scale += math.log(norm)

    value = LogComplex.from_complex(r[j]) * LogComplex(log_scale, 0.0)
    return value.signed(1 if (m - 1 - j) % 2 == 0 else -1)


def schur_ratio_table(q: FrequencyTuple, k_max: int) -> np.ndarray:
    """
    All ratios det A_m^{j,k}/det A_m for k = m..k_max, j = 0..m-1.

    Row k - m holds the m values for that k; one remainder recurrence serves every j.
    """
    m = q.m
    if k_max < m:
        return np.zeros((0, m), dtype=np.complex128)
    e = elementary_symmetric_all(q.points)
    p = np.array([(-1) ** (m - l) * e[m - l] for l in range(m)], dtype=np.complex128)
    signs = np.array([1.0 if (m - 1 - j) % 2 == 0 else -1.0 for j in range(m)])

    table = np.zeros((k_max - m + 1, m), dtype=np.complex128)
    r = np.zeros(m, dtype=np.complex128)
    r[m - 1] = 1.0
    log_scale = 0.0
    with np.errstate(over="ignore"):
        for row in range(k_max - m + 1):
            top = r[m - 1]
            shifted = np.zeros_like(r)
            shifted[1:] = r[:-1]
            r = shifted - top * p
            norm = float(np.max(np.abs(r)))
            if norm == 0.0:
                break
            r /= norm
            log_scale += math.log(norm)
            table[row] = signs * r * math.exp(min(log_scale, 709.0))
    return table


def schur_ratio_tableaux(q: FrequencyTuple, j: int, k: int) -> complex:
    """
    Same ratio as schur_ratio, summed over semistandard tableaux of the hook
    shape (k-m+1, 1^(m-j-1)) with entries 1..m.

    Raises:
        DomainError: On index violation or if m > 8 or k - j > 10
    """
    m = q.m
    _check_indices(m, j, k)
    if m > TABLEAU_MAX_M or k - j > TABLEAU_MAX_SPAN:
        raise DomainError(f"Tableau enumeration limited to m <= {TABLEAU_MAX_M}, k-j <= {TABLEAU_MAX_SPAN}")

    arm = k - m + 1
    leg = m - j
    if arm == 0:
        return 1.0 + 0j

    pts = q.points
    total = 0j
    for column in itertools.combinations(range(m), leg):
        column_term = np.prod(pts[list(column)])
        for row in itertools.combinations_with_replacement(range(column[0], m), arm - 1):
            total += column_term * np.prod(pts[list(row)]) if row else column_term
    return complex(total)


def schur_term_count(m: int, j: int, k: int) -> int:
    """
    Number of monomials in the Schur ratio: k! / (j! (m-j-1)! (k-m)! (k-j)).

    The case j = m-1 is binom(k, m-1).

    Raises:
        DomainError: On index violation
        OverflowError: If the count exceeds 2^63
    """
    _check_indices(m, j, k)
    if j == m - 1:
        count = math.comb(k, m - 1)
    else:
        numerator = math.factorial(k)
        denominator = math.factorial(j) * math.factorial(m - j - 1) * math.factorial(k - m) * (k - j)
        count = numerator // denominator
    if count > TERM_COUNT_LIMIT:
        raise OverflowError(f"Term count for m={m}, j={j}, k={k} exceeds 2^63")
    return count
