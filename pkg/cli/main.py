"""
Command-line entry point for the F-polynomial toolkit.

Subcommands: interp, bounds, fekete, capacity, zeros and laplace. Each one
writes a table as JSON or CSV; failures produce a structured error payload and
a nonzero exit code (2 for configuration problems, 3 for numerical ones).
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from config import CLI_CONFIG, NUMERICS_CONFIG, ZEROS_CONFIG, print_config
from engine.capacity import (
    CompactSetDescriptor,
    bracket_from_array,
    capacity_limits,
    default_grid,
    diameter_row,
    fekete_array,
)
from engine.interpolation import (
    error_bound,
    error_decomposition,
    eval_fpoly,
    extremal_fpoly,
    interpolate,
    sup_norm_disk,
    tq_bounds,
)
from engine.laplace import (
    SpectralMeasure,
    atomic_bound_experiment,
    chi_r_family,
    dirac_example,
    lambda_limit_abs,
)
from engine.vandermonde import FrequencyTuple
from engine.zeros import nm_experiment
from errors import ConfigError, FPadeError, NumericalError
from series.function_registry import get_function_registry, parse_holo
from series.series_core import EntireFunction, monomial
from utils.serialization import dumps_json, rows_to_csv, write_artifact

logger = logging.getLogger(__name__)

EXPERIMENTS = ("dirac-example", "fourier-limit", "chi-r", "atomic-bound")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# Per-subcommand defaults used when --m/--trials/--r are not given
DEFAULT_M = {
    "interp": [4, 8, 12],
    "bounds": list(range(2, 13)),
    "fekete": [4],
    "zeros": [5, 10, 20],
    "laplace": [64],
}
DEFAULT_M_MAX = {"capacity": 200, "laplace": 101}
DEFAULT_TRIALS = {"interp": 20, "bounds": 5, "zeros": 1, "laplace": 50}
DEFAULT_SET = {"interp": "disk:1", "bounds": "disk:1"}
DEFAULT_R = {"interp": 1.5, "zeros": ZEROS_CONFIG["bound_radius"]}
DEFAULT_FOURIER_MEASURE = {"kind": "fourier", "coeffs": {"1": [0.5, 0.0], "-1": [0.5, 0.0]}}


def parse_m_range(text: str) -> List[int]:
    """
    Parse '4', '4,8,12' or the inclusive range '2:40'.

    Raises:
        ConfigError: On malformed input or m < 1
    """
    try:
        if ":" in text:
            start, _, stop = text.partition(":")
            values = list(range(int(start), int(stop) + 1))
        else:
            values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"Bad m range '{text}'", reason="bad_m_range") from None
    if not values or min(values) < 1:
        raise ConfigError(f"m range '{text}' must list integers >= 1", reason="bad_m_range")
    return values


class RunConfig(BaseModel):
    """Validated run configuration; a --config JSON file overrides the flags."""

    subcommand: Literal["interp", "bounds", "fekete", "capacity", "zeros", "laplace"]
    set_descriptor: Union[str, Dict] = "circle:1"
    F_label: str = "exp"
    custom_F: Optional[str] = None
    m_range: Optional[List[int]] = None
    m_max: Optional[int] = Field(default=None, ge=1)
    seed: int = CLI_CONFIG["default_seed"]
    tol: float = Field(default=NUMERICS_CONFIG["default_tol"], gt=0)
    output_path: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    grid_n: Optional[int] = Field(default=None, ge=4)
    trials: Optional[int] = Field(default=None, ge=1)
    g: str = "geometric:2"
    r: Optional[float] = Field(default=None, gt=0)
    z_max: float = Field(default=0.6, ge=0)
    experiment: Literal["dirac-example", "fourier-limit", "chi-r", "atomic-bound"] = "dirac-example"
    measure: Optional[str] = None
    r_list: List[float] = [0.9, 0.99, 0.999]

    @field_validator("m_range", mode="before")
    @classmethod
    def _m_range(cls, value):
        if isinstance(value, str):
            return parse_m_range(value)
        if isinstance(value, int):
            return [value]
        return value

    @field_validator("r_list", mode="before")
    @classmethod
    def _r_list(cls, value):
        if isinstance(value, str):
            return [float(v) for v in value.split(",") if v.strip()]
        return value

    def compact_set(self) -> CompactSetDescriptor:
        if isinstance(self.set_descriptor, dict):
            return CompactSetDescriptor.from_json(self.set_descriptor)
        if self.set_descriptor.endswith(".json"):
            return CompactSetDescriptor.from_json(self.set_descriptor)
        return CompactSetDescriptor.parse(self.set_descriptor)

    def entire_function(self) -> EntireFunction:
        registry = get_function_registry()
        if self.custom_F:
            return registry.load_custom(self.custom_F)
        return registry.get(self.F_label)

    def m_values(self) -> List[int]:
        """--m if given, else 1..m_max (or 2..m_max for capacity), else the subcommand default."""
        if self.m_range:
            return sorted(set(self.m_range))
        if self.m_max is not None:
            start = 2 if self.subcommand in ("capacity", "fekete") else 1
            return list(range(start, self.m_max + 1))
        if self.subcommand == "capacity":
            return list(range(2, DEFAULT_M_MAX["capacity"] + 1))
        return DEFAULT_M[self.subcommand]

    def trial_count(self) -> int:
        return self.trials if self.trials is not None else DEFAULT_TRIALS.get(self.subcommand, 1)

    def radius(self) -> float:
        return self.r if self.r is not None else DEFAULT_R.get(self.subcommand, 1.5)


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge parsed flags with an optional --config JSON file (file values win).

    Raises:
        ConfigError: If the file is unreadable or the merged values are invalid
    """
    fields = (
        "set_descriptor", "F_label", "custom_F", "m_range", "m_max", "seed", "tol", "format",
        "grid_n", "trials", "g", "r", "z_max", "experiment", "measure", "r_list",
    )
    values = {name: getattr(args, name, None) for name in fields}
    values["output_path"] = args.output
    values["subcommand"] = args.subcommand
    values["set_descriptor"] = values["set_descriptor"] or DEFAULT_SET.get(args.subcommand, "circle:1")
    values = {k: v for k, v in values.items() if v is not None}

    if args.config:
        path = Path(args.config)
        try:
            with open(path, "r", encoding="utf-8") as f:
                overrides = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {path}", reason="file_not_found") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}", reason="bad_config") from e
        if not isinstance(overrides, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object", reason="bad_config")
        values.update(overrides)

    try:
        return RunConfig.model_validate(values)
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {e}", reason="bad_config") from e


def _random_point(rng: np.random.Generator, z_max: float) -> complex:
    return complex(z_max * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform()))


def run_interp(config: RunConfig) -> List[Dict]:
    """
    Interpolate g on random node tuples of K and compare |g(z) - T g(z)| with the error bound.

    `err` is measured through the remainder decomposition, `err_direct` by
    evaluating the interpolant itself. `agrees` checks the two against the
    evaluation error allowed for f, tol * (1 + ||f||_1).
    """
    K = config.compact_set()
    F = config.entire_function()
    g = parse_holo(config.g)
    r = config.radius()
    rows = []
    for m in config.m_values():
        rng = np.random.default_rng([config.seed, m])
        for trial in range(config.trial_count()):
            q = FrequencyTuple.from_points(K.sample(m, rng))
            z = _random_point(rng, config.z_max)
            f = interpolate(g, F, q)
            err = abs(error_decomposition(g, F, q, z).total)
            err_direct = abs(complex(g.evaluate(np.array([z]))[0]) - eval_fpoly(f, z, config.tol))
            bound = error_bound(g, q, F, z, r)
            rows.append({
                "m": m,
                "trial": trial,
                "z_abs": abs(z),
                "err": err,
                "err_direct": err_direct,
                "norm_1": f.norm_1,
                "agrees": abs(err - err_direct) <= config.tol * (1.0 + f.norm_1),
                "bound": bound,
                "holds": err <= bound + 1e-8,
            })
    logger.info(f"interp: {len(rows)} rows for g={g.label}, F={F.label}")
    return rows


def run_bounds(config: RunConfig) -> List[Dict]:
    """t(q) and eps(q) brackets on random tuples, with the x^(m-1) witness and the extremal sup norm."""
    K = config.compact_set()
    F = config.entire_function()
    cap = NUMERICS_CONFIG["dense_inverse_cap"]
    rows = []
    for m in config.m_values():
        rng = np.random.default_rng([config.seed, m])
        for trial in range(config.trial_count()):
            q = FrequencyTuple.from_points(K.sample(m, rng))
            tq = tq_bounds(q, F)
            linear = tq.linear()
            witness = interpolate(monomial(m - 1), F, q).norm_inf if m <= cap else None
            extremal = extremal_fpoly(q, F)
            extremal_sup = sup_norm_disk(extremal)
            witness_ok = None
            if witness is not None:
                witness_ok = tq.log_t_lower - 1e-9 <= math.log(witness) <= tq.log_t_upper + 1e-9
            rows.append({
                "m": m,
                "trial": trial,
                "log_gamma": tq.log_gamma,
                **linear,
                "log_t_lower": tq.log_t_lower,
                "log_t_upper": tq.log_t_upper,
                "witness": witness,
                "witness_in_bracket": witness_ok,
                "extremal_sup": extremal_sup,
                "extremal_ok": math.log(extremal_sup) <= tq.log_eps_upper + 1e-9,
            })
    logger.info(f"bounds: {len(rows)} rows")
    return rows


def run_fekete(config: RunConfig) -> List[Dict]:
    """Near-Fekete tuples per m with log V_m, the d(K) estimates and the Chebyshev bracket."""
    K = config.compact_set()
    m_values = config.m_values()
    grid_n = default_grid(max(m_values)) if config.grid_n is None else config.grid_n
    # the brackets need the (m-1)-tuples too
    needed = set(m_values) | {m - 1 for m in m_values if m >= 2}
    array = fekete_array(K, sorted(needed), grid_n, config.seed)
    grid = K.boundary_grid(grid_n)

    rows = []
    for m in m_values:
        bracket = bracket_from_array(array, m, grid)[0] if m >= 2 else None
        diameter = diameter_row(array, m) if m >= 2 else None
        extra = {
            "d_raw": diameter["d_raw"] if diameter else None,
            "d_estimate": diameter["d_estimate"] if diameter else None,
            "tau_low": bracket.tau_low if bracket else None,
            "tau_high": bracket.tau_high if bracket else None,
            "tau_direct": bracket.tau_direct if bracket else None,
            "method": array.method,
        }
        for row in array.csv_rows():
            if row["m"] == m:
                rows.append({**row, **extra})
    return rows


def run_capacity(config: RunConfig) -> List[Dict]:
    K = config.compact_set()
    F = config.entire_function()
    m_values = [m for m in config.m_values() if m >= 2]
    if not m_values:
        raise ConfigError("capacity needs some m >= 2", reason="bad_m_range")
    return capacity_limits(K, F, max(3, max(m_values)), config.grid_n, config.seed, m_values=m_values)


def run_zeros(config: RunConfig) -> List[Dict]:
    K = config.compact_set()
    F = config.entire_function()
    return nm_experiment(K, F, config.m_values(), config.trial_count(), config.seed, config.radius(), config.grid_n)


def _load_measure(config: RunConfig) -> SpectralMeasure:
    if config.measure:
        return SpectralMeasure.from_json(config.measure)
    return SpectralMeasure.from_json(DEFAULT_FOURIER_MEASURE)


def run_laplace(config: RunConfig) -> List[Dict]:
    """Dispatch the Laplace-transform experiments."""
    experiment = config.experiment
    if experiment == "dirac-example":
        m_max = config.m_max or (max(config.m_range) if config.m_range else DEFAULT_M_MAX["laplace"])
        return dirac_example(m_max)
    if experiment == "fourier-limit":
        return lambda_limit_abs(_load_measure(config), config.m_values())
    if experiment == "chi-r":
        rows = []
        for r in config.r_list:
            for m in config.m_values():
                row = chi_r_family(r, m)
                rows.append({
                    "r": row.r,
                    "m": row.m,
                    "lambda": row.lam,
                    "l1_norm_chi": row.l1_norm_chi,
                    "l1_norm_chi_minus": row.l1_norm_chi_minus,
                    "converged": row.converged,
                })
        return rows
    return atomic_bound_experiment(
        config.entire_function(), config.m_values(), config.trial_count(), config.seed
    )


HANDLERS: Dict[str, Callable[[RunConfig], List[Dict]]] = {
    "interp": run_interp,
    "bounds": run_bounds,
    "fekete": run_fekete,
    "capacity": run_capacity,
    "zeros": run_zeros,
    "laplace": run_laplace,
}


def error_payload(error: Exception) -> Dict:
    """Structured error payload written to stdout."""
    return {
        "status": "error",
        "error": type(error).__name__,
        "reason": getattr(error, "reason", "internal_error"),
        "message": str(error),
    }


def render(config: RunConfig, rows: List[Dict]) -> str:
    if config.format == "csv":
        return rows_to_csv(rows)
    payload = {"status": "success", "subcommand": config.subcommand, "rows": rows}
    if config.subcommand == "laplace":
        payload["experiment"] = config.experiment
    return dumps_json(payload)


def run(config: RunConfig, stdout=None) -> int:
    """
    Run one validated configuration.

    Returns:
        Process exit code
    """
    stdout = stdout or sys.stdout
    try:
        logger.info(f"Running '{config.subcommand}' (seed={config.seed})")
        rows = HANDLERS[config.subcommand](config)
        write_artifact(render(config, rows), config.output_path, stream=stdout)
        logger.info(f"✅ '{config.subcommand}' finished with {len(rows)} rows")
        return EXIT_OK
    except ConfigError as e:
        logger.error(f"❌ Configuration error: {e}", exc_info=True)
        stdout.write(dumps_json(error_payload(e)))
        return EXIT_CONFIG
    except NumericalError as e:
        logger.error(f"❌ Numerical error: {e}", exc_info=True)
        stdout.write(dumps_json(error_payload(e)))
        return EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--set", dest="set_descriptor", help="Compact set, e.g. circle:1, segment:-1,1 or a JSON file")
    common.add_argument("--F", dest="F_label", help="Built-in entire function label (exp, alt, osc)")
    common.add_argument("--custom-F", dest="custom_F", help="JSON file of [re, im] Taylor coefficient pairs")
    common.add_argument("--m", dest="m_range", help="m values: 4, 4,8,12 or 2:40")
    common.add_argument("--m-max", dest="m_max", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--output", help="Write the artifact here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--config", help="JSON file whose values override the flags")
    common.add_argument("--grid-n", dest="grid_n", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--show-config", action="store_true", help="Print the environment configuration to stderr")

    parser = argparse.ArgumentParser(prog="fpade", description="F-polynomial Pade interpolation toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    interp = sub.add_parser("interp", parents=[common], help="Interpolation error against its bound")
    interp.add_argument("--g", help="Test function: geometric:R, exp:a, poly:p0,p1,... or monomial:k")
    interp.add_argument("--r", type=float, help="Bound radius with |z| < r < radius of g")
    interp.add_argument("--z-max", dest="z_max", type=float, help="Largest |z| of the test points")

    sub.add_parser("bounds", parents=[common], help="t(q) and eps(q) brackets")
    sub.add_parser("fekete", parents=[common], help="Near-Fekete tuples and Chebyshev brackets")
    sub.add_parser("capacity", parents=[common], help="eps_m brackets against e*d(K)")

    zeros = sub.add_parser("zeros", parents=[common], help="Zero counts of extremal F-polynomials")
    zeros.add_argument("--r", type=float, help="Growth radius of the zero-count bound (> 1)")

    laplace = sub.add_parser("laplace", parents=[common], help="Laplace-transform interpolation experiments")
    laplace.add_argument("--experiment", choices=EXPERIMENTS)
    laplace.add_argument("--measure", help="Spectral measure JSON file")
    laplace.add_argument("--r-list", dest="r_list", help="Comma-separated r values for chi-r")

    return parser


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    """Parse arguments, run the subcommand and return the exit code."""
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.show_config:
        print_config(sys.stderr)
    try:
        config = load_run_config(args)
    except ConfigError as e:
        logger.error(f"❌ Configuration error: {e}", exc_info=True)
        stdout.write(dumps_json(error_payload(e)))
        return EXIT_CONFIG

    try:
        return run(config, stdout)
    except FPadeError as e:
        logger.error(f"❌ Unclassified toolkit error: {e}", exc_info=True)
        stdout.write(dumps_json(error_payload(e)))
        return EXIT_INTERNAL
    except Exception as e:
        logger.error(f"❌ Unexpected error: {e}", exc_info=True)
        stdout.write(dumps_json({**error_payload(e), "reason": "internal_error"}))
        return EXIT_INTERNAL
