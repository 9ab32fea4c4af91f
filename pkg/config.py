"""
Configuration module for the F-polynomial toolkit.
Centralized settings management; every value can be overridden from the environment.
"""

import os
import sys
from pathlib import Path

# Project root
PROJECT_ROOT = Path(__file__).parent

# Data paths
DATA_DIR = PROJECT_ROOT / "data"
CUSTOM_COEFFS_FILE = DATA_DIR / "custom_coeffs.json"

# Floating point guards and caps
NUMERICS_CONFIG = {
    "default_tol": float(os.getenv("FPADE_TOL", "1e-13")),
    "separation_guard": float(os.getenv("FPADE_SEPARATION_GUARD", "1e-10")),
    "conditioning_limit": float(os.getenv("FPADE_CONDITIONING_LIMIT", "1e14")),
    "dense_inverse_cap": int(os.getenv("FPADE_DENSE_INVERSE_CAP", "64")),
    "linear_log_limit": float(os.getenv("FPADE_LINEAR_LOG_LIMIT", "700")),
}

# Boundary sampling and circle quadrature
SAMPLING_CONFIG = {
    "disk_sup_samples": int(os.getenv("FPADE_SUP_SAMPLES", "4096")),
    "sup_inflation": float(os.getenv("FPADE_SUP_INFLATION", "1.01")),
    "circle_quadrature_points": int(os.getenv("FPADE_QUADRATURE_POINTS", "8192")),
    "total_variation_inflation": float(os.getenv("FPADE_TV_INFLATION", "1.005")),
}

# Fekete search
FEKETE_CONFIG = {
    "min_grid": int(os.getenv("FPADE_MIN_GRID", "512")),
    "grid_per_point": int(os.getenv("FPADE_GRID_PER_POINT", "16")),
    "max_passes": int(os.getenv("FPADE_MAX_PASSES", "50")),
}

# Argument-principle zero counting
ZEROS_CONFIG = {
    "samples": int(os.getenv("FPADE_CONTOUR_SAMPLES", "1024")),
    "contour_radius": float(os.getenv("FPADE_CONTOUR_RADIUS", str(1.0 + 1e-6))),
    "nudge": float(os.getenv("FPADE_CONTOUR_NUDGE", "1e-4")),
    "retries": int(os.getenv("FPADE_CONTOUR_RETRIES", "8")),
    "max_points": int(os.getenv("FPADE_MAX_CONTOUR_POINTS", str(2 ** 22))),
    "vanishing_tol": float(os.getenv("FPADE_VANISHING_TOL", "1e-9")),
    "bound_radius": float(os.getenv("FPADE_BOUND_RADIUS", "3.0")),
}

# Laplace transforms of circle densities
LAPLACE_CONFIG = {
    "fourier_support_cap": int(os.getenv("FPADE_FOURIER_SUPPORT_CAP", "4096")),
    "quad_limit": int(os.getenv("FPADE_QUAD_LIMIT", "500")),
    "quad_tol": float(os.getenv("FPADE_QUAD_TOL", "1e-9")),
}

# Command-line harness
CLI_CONFIG = {
    "threads": int(os.getenv("FPADE_THREADS", "1")),
    "float_digits": int(os.getenv("FPADE_FLOAT_DIGITS", "17")),
    "default_seed": int(os.getenv("FPADE_SEED", "0")),
}

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")


def get_config():
    """Get full configuration dictionary."""
    return {
        "numerics": NUMERICS_CONFIG,
        "sampling": SAMPLING_CONFIG,
        "fekete": FEKETE_CONFIG,
        "zeros": ZEROS_CONFIG,
        "laplace": LAPLACE_CONFIG,
        "cli": CLI_CONFIG,
        "log_level": LOG_LEVEL,
    }


class Settings:
    """Runtime settings read at call time (worker threads for table cells)."""

    def __init__(self):
        self.THREADS = max(1, CLI_CONFIG["threads"])


def get_settings() -> Settings:
    """Get settings object."""
    return Settings()


def print_config(stream=None):
    """Print configuration (for debugging)."""
    stream = stream or sys.stderr
    config = get_config()
    print("\n=== F-polynomial toolkit configuration ===", file=stream)
    for section, values in config.items():
        print(f"\n[{section.upper()}]", file=stream)
        if isinstance(values, dict):
            for key, val in values.items():
                print(f"  {key}: {val}", file=stream)
        else:
            print(f"  {values}", file=stream)
    print("\n==========================================\n", file=stream)
