"""
Log-magnitude complex numbers.
Long products such as Vandermonde determinants and (m-1)!/gamma(q) are carried
as (log|w|, arg w) pairs so that m in the hundreds never overflows.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

logger = logging.getLogger(__name__)


def wrap_phase(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    if -math.pi < theta <= math.pi:
        return theta
    return math.pi - (math.pi - theta) % (2.0 * math.pi)


@dataclass(frozen=True)
class LogComplex:
    """The complex number exp(log_mag + i*phase); zero has log_mag = -inf."""

    log_mag: float
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "log_mag", float(self.log_mag))
        object.__setattr__(self, "phase", wrap_phase(float(self.phase)) if self.log_mag != -math.inf else 0.0)

    @classmethod
    def from_complex(cls, w: complex) -> "LogComplex":
        w = complex(w)
        if w == 0:
            return cls.zero()
        return cls(math.log(abs(w)), math.atan2(w.imag, w.real))

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(-math.inf, 0.0)

    @classmethod
    def one(cls) -> "LogComplex":
        return cls(0.0, 0.0)

    @classmethod
    def product(cls, factors: Iterable[complex]) -> "LogComplex":
        """
        Multiply many complex factors in log scale.

        Args:
            factors: Complex values (array-like)

        Returns:
            Their product as a LogComplex
        """
        values = np.asarray(list(factors) if not isinstance(factors, np.ndarray) else factors, dtype=np.complex128)
        if values.size == 0:
            return cls.one()
        magnitudes = np.abs(values)
        if np.any(magnitudes == 0.0):
            return cls.zero()
        return cls(float(np.sum(np.log(magnitudes))), float(np.sum(np.angle(values))))

    @property
    def is_zero(self) -> bool:
        return self.log_mag == -math.inf

    @property
    def magnitude(self) -> float:
        """|w|, possibly inf when log_mag exceeds the float range."""
        if self.log_mag > 709.78:
            return math.inf
        return math.exp(self.log_mag)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag + other.log_mag, self.phase + other.phase)

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        other = _coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("LogComplex division by zero")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag - other.log_mag, self.phase - other.phase)

    def __neg__(self) -> "LogComplex":
        if self.is_zero:
            return self
        return LogComplex(self.log_mag, self.phase + math.pi)

    def __pow__(self, exponent: int) -> "LogComplex":
        if self.is_zero:
            return LogComplex.one() if exponent == 0 else LogComplex.zero()
        return LogComplex(self.log_mag * exponent, self.phase * exponent)

    def signed(self, sign: int) -> "LogComplex":
        """Multiply by +1 or -1."""
        return self if sign >= 0 else -self


def _coerce(value) -> LogComplex:
    if isinstance(value, LogComplex):
        return value
    return LogComplex.from_complex(value)
