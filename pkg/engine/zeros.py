"""
Zero counting by the argument principle.

F-polynomials vanishing to high order at the origin are wound through their
Taylor series after dividing out z^v, which avoids the cancellation in
sum_j c_j F(q_j z) near 0.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from config import ZEROS_CONFIG
from engine.capacity import CompactSetDescriptor, chebyshev_bracket, fekete_search
from engine.interpolation import FPolynomial, extremal_fpoly, sup_norm_disk
from engine.vandermonde import FrequencyTuple
from errors import ContourThroughZero, DomainError, NonConvergent, NumericalError
from series.series_core import EntireFunction
from utils.parallel import ordered_map

logger = logging.getLogger(__name__)

ZERO_CONTOUR_RATIO = 1e-8
MAX_RESIDUAL = 0.25


@dataclass(frozen=True)
class ZeroCount:
    """Zeros inside the contour |z| = radius."""

    count: int
    radius: float
    winding_residual: float


@dataclass(frozen=True)
class Winding:
    """Raw winding of one contour pass, with the extreme |func| seen and the final sample count."""

    raw: float
    min_abs: float
    max_abs: float
    points: int


def winding_number(
    func: Callable[[np.ndarray], np.ndarray],
    radius: float,
    samples: int = ZEROS_CONFIG["samples"],
    max_points: int = ZEROS_CONFIG["max_points"],
) -> Winding:
    """
    Winding number of func around 0 along |z| = radius.

    Phase increments between consecutive samples are summed; any interval
    whose increment exceeds pi/2 is bisected until none is left.

    Raises:
        NonConvergent: If refinement needs more than max_points samples
    """
    theta = 2.0 * np.pi * np.arange(samples + 1) / samples
    values = np.asarray(func(radius * np.exp(1j * theta[:-1])), dtype=np.complex128)
    values = np.append(values, values[0])

    while True:
        with np.errstate(divide="ignore", invalid="ignore"):
            steps = np.angle(values[1:] / values[:-1])
        coarse = np.flatnonzero(np.abs(steps) > math.pi / 2)
        if coarse.size == 0:
            break
        if theta.size + coarse.size > max_points:
            raise NonConvergent(f"Winding refinement exceeded {max_points} points at radius {radius:g}")
        mid = 0.5 * (theta[coarse] + theta[coarse + 1])
        mid_values = np.asarray(func(radius * np.exp(1j * mid)), dtype=np.complex128)
        theta = np.insert(theta, coarse + 1, mid)
        values = np.insert(values, coarse + 1, mid_values)

    magnitudes = np.abs(values)
    return Winding(
        raw=float(np.sum(steps) / (2.0 * math.pi)),
        min_abs=float(np.min(magnitudes)),
        max_abs=float(np.max(magnitudes)),
        points=int(theta.size - 1),
    )


def _deflated_series(f: FPolynomial, radius: float, vanishing_tol: float):
    """Taylor coefficients of f(z)/z^v and the order v, with a negligible tail on |z| <= radius."""
    scale = max(1.0, f.F.gamma * f.norm_1)
    w = f.freqs.max_modulus * radius
    count = 2 * f.m + int(2 * w) + 40
    while True:
        v = f.vanishing_order(count, vanishing_tol)
        if v >= count - 1:
            raise DomainError("F-polynomial vanishes identically to working precision")

        terms = f.taylor_coefficients(count)
        terms[:v] = 0.0
        lead = abs(terms[v]) * radius ** v
        n = count - 1
        ratio = w / (n + 2)
        if ratio < 1.0 and w > 0.0:
            log_tail = math.log(scale) + (n + 1) * math.log(w) - math.lgamma(n + 2) - math.log1p(-ratio)
            if log_tail < math.log(1e-12 * lead):
                return terms[v:], v
        elif w == 0.0:
            return terms[v:], v
        count *= 2


def count_zeros(
    f: FPolynomial,
    radius: float = ZEROS_CONFIG["contour_radius"],
    samples: int = ZEROS_CONFIG["samples"],
) -> ZeroCount:
    """
    Number of zeros of f in |z| < radius.

    The zero of exact order v at the origin is divided out first; the rest is
    the winding number of f(z)/z^v. A contour passing too close to a zero is
    pushed outwards by the configured nudge factor.

    Raises:
        ContourThroughZero: If every nudged contour passes too close to a zero
        NonConvergent: If refinement overflows or the winding residual is >= 0.25
    """
    if not np.any(f.coeffs):
        raise DomainError("The zero F-polynomial has no finite zero count")
    retries = ZEROS_CONFIG["retries"]
    nudge = ZEROS_CONFIG["nudge"]
    outer = radius * (1.0 + nudge) ** retries
    terms, v = _deflated_series(f, outer, ZEROS_CONFIG["vanishing_tol"])

    def quotient(z):
        acc = np.zeros(z.shape, dtype=np.complex128)
        for a in terms[::-1]:
            acc = acc * z + a
        return acc

    current = radius
    for attempt in range(retries + 1):
        winding = winding_number(quotient, current, samples)
        if winding.min_abs >= ZERO_CONTOUR_RATIO * winding.max_abs:
            turns = round(winding.raw)
            residual = abs(winding.raw - turns)
            if residual >= MAX_RESIDUAL:
                raise NonConvergent(f"Winding residual {residual:.3f} at radius {current:g}")
            return ZeroCount(count=v + int(turns), radius=current, winding_residual=residual)
        logger.warning(f"Contour |z|={current:.8g} passes near a zero, nudging (attempt {attempt + 1})")
        current *= 1.0 + nudge
    raise ContourThroughZero(f"No zero-free contour found near radius {radius:g} after {retries} retries")


def zero_count_bound(m: int, M: float, gamma: float, tau: float, r: float = ZEROS_CONFIG["bound_radius"]) -> float:
    """
    Upper bound for the minimal zero count N_m:

        [log Gamma + M(r+1) + m log m - (m-1) log tau_{m-1}] / log((r^2+1)/(2r))
    """
    if r <= 1.0:
        raise DomainError(f"Bound radius must exceed 1, got {r}")
    tau_term = (m - 1) * math.log(tau) if m > 1 else 0.0
    numerator = math.log(gamma) + M * (r + 1.0) + m * math.log(m) - tau_term
    return numerator / math.log((r * r + 1.0) / (2.0 * r))


def growth_lower_bound(n_f: int, r: float) -> float:
    """((r^2+1)/(2r))^n_f, the growth forced by n_f zeros in the unit disk."""
    return ((r * r + 1.0) / (2.0 * r)) ** n_f


def growth_check(f: FPolynomial, count: int, r: float = ZEROS_CONFIG["bound_radius"]) -> Dict:
    """Compare the forced growth with max_{|z|=r} |f| / ||f||_Delta."""
    norm_disk = sup_norm_disk(f)
    norm_r = sup_norm_disk(f, radius=r)
    ratio = norm_r / norm_disk
    forced = growth_lower_bound(count, r)
    return {"forced_growth": forced, "observed_growth": ratio, "holds": forced <= ratio}


def _trial_tuple(K: CompactSetDescriptor, m: int, trial: int, seed: int, grid_n: Optional[int]) -> FrequencyTuple:
    if K.kind in ("circle", "disk"):
        rng = np.random.default_rng([seed, m, trial])
        return FrequencyTuple.roots_of_unity(m, K.R, rotation=float(rng.uniform(0.0, 2.0 * math.pi)))
    return fekete_search(K, m, grid_n, seed + trial)


def nm_experiment(
    K: CompactSetDescriptor,
    F: EntireFunction,
    m_list: Sequence[int],
    trials: int = 1,
    seed: int = 0,
    r: float = ZEROS_CONFIG["bound_radius"],
    grid_n: Optional[int] = None,
) -> List[Dict]:
    """
    Zero counts of the order-(m-1) vanishing extremal F-polynomial on near-Fekete tuples.

    Rows: m, count (min over trials), count_max, bound_at_r, ratio = count/(m log m),
    missing (failed trials). A cell whose trials all fail has count None.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")

    def cell(m: int) -> Dict:
        counts = []
        missing = 0
        for trial in range(trials):
            try:
                q = _trial_tuple(K, m, trial, seed, grid_n)
                counts.append(count_zeros(extremal_fpoly(q, F)).count)
            except NumericalError as e:
                missing += 1
                logger.warning(f"Zero count failed for m={m}, trial {trial}: {e}")

        tau = chebyshev_bracket(K, m, grid_n, seed).tau_low if m > 1 else 1.0
        count = min(counts) if counts else None
        return {
            "m": m,
            "count": count,
            "count_max": max(counts) if counts else None,
            "bound_at_r": zero_count_bound(m, K.M, F.gamma, tau, r),
            "ratio": count / (m * math.log(m)) if count is not None and m > 1 else None,
            "missing": missing,
            "trials": trials,
        }

    rows = ordered_map(cell, sorted(set(int(m) for m in m_list)))
    logger.info(f"Zero-count table for {K.kind}: {len(rows)} rows")
    return rows
