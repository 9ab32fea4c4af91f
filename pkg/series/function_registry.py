"""
Registry of entire functions keyed by label.
Holds the built-in functions and any custom coefficient sequences loaded from JSON.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import TypeAdapter, ValidationError

from errors import ConfigError
from series.series_core import (
    EntireFunction,
    HoloFunction,
    alternating_function,
    exp_function,
    exponential,
    from_coefficients,
    geometric,
    monomial,
    oscillating_function,
    polynomial,
)

logger = logging.getLogger(__name__)

_COEFFICIENT_PAIRS = TypeAdapter(List[Tuple[float, float]])


class FunctionRegistry:
    """Singleton registry of entire functions."""
    _instance = None
    _functions: Dict[str, EntireFunction] = {}

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._functions = {}
            cls._instance._register_builtins()
        return cls._instance

    def _register_builtins(self):
        for F in (exp_function(), alternating_function(), oscillating_function()):
            self._functions[F.label] = F

    def register(self, F: EntireFunction) -> EntireFunction:
        """Add or replace a function under its label."""
        if F.label in self._functions:
            logger.warning(f"Replacing registered function '{F.label}'")
        self._functions[F.label] = F
        return F

    def get(self, label: str) -> EntireFunction:
        """
        Look up a function by label.

        Raises:
            ConfigError: If the label is unknown
        """
        try:
            return self._functions[label]
        except KeyError:
            raise ConfigError(
                f"Unknown entire function '{label}'. Available: {', '.join(self.labels())}",
                reason="unknown_function",
            ) from None

    def labels(self) -> List[str]:
        return sorted(self._functions)

    def load_custom(self, path: Union[str, Path], label: Optional[str] = None, gamma: Optional[float] = None) -> EntireFunction:
        """
        Load a coefficient sequence from a JSON array of [re, im] pairs.

        Args:
            path: JSON file path
            label: Registry label (default: file stem)
            gamma: Bound constant (default: max |F_n|)

        Returns:
            The registered EntireFunction

        Raises:
            ConfigError: If the file is missing or malformed
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Coefficient file not found: {path}", reason="file_not_found")
        try:
            with open(path, "r", encoding="utf-8") as f:
                pairs = _COEFFICIENT_PAIRS.validate_python(json.load(f))
        except (json.JSONDecodeError, ValidationError) as e:
            raise ConfigError(f"Invalid coefficient file {path}: {e}", reason="invalid_coefficients") from e

        F = from_coefficients([complex(re, im) for re, im in pairs], label or path.stem, gamma)
        logger.info(f"✅ Loaded {len(pairs)} coefficients for '{F.label}' (gamma={F.gamma:g})")
        return self.register(F)

    def reset(self):
        """Drop custom functions, keeping the built-ins."""
        self._functions = {}
        self._register_builtins()


def get_function_registry() -> FunctionRegistry:
    """Get the function registry singleton."""
    return FunctionRegistry()


def parse_holo(text: str) -> HoloFunction:
    """
    Build a test function from a short form.

    Accepted: 'geometric:R', 'exp:a', 'poly:p0,p1,...', 'monomial:k'.

    Raises:
        ConfigError: On an unknown family or bad parameters
    """
    family, _, arg = text.partition(":")
    try:
        if family == "geometric":
            return geometric(float(arg or 1.0))
        if family == "exp":
            return exponential(complex(arg or 1.0))
        if family == "poly":
            return polynomial([complex(p) for p in arg.split(",") if p])
        if family == "monomial":
            return monomial(int(arg))
    except ValueError as e:
        raise ConfigError(f"Bad parameters for test function '{text}': {e}", reason="bad_test_function") from e
    raise ConfigError(f"Unknown test function family '{family}'", reason="bad_test_function")
