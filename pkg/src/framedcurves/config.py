"""Numerical thresholds shared across modules.

``FG_TOL`` in the environment overrides the absolute zero threshold used by
every criterion test; it is read at call time so the CLI and tests can set it
per run.
"""
import os

DEFAULT_ORDER = 5

EPS_ZERO_DEFAULT = 1e-8
EPS_RANK = 1e-7
EPS_DIV = 1e-12

QUAD_TOL = 1e-12
QUAD_MAX_DEPTH = 40

RK_STEPS = 4096
SCAN_POINTS = 4096
ROOT_WIDTH = 1e-13

# margin kept around zeros of m-bar when splitting a domain
GUARD_DELTA = 1e-3


def eps_zero():
    raw = os.environ.get("FG_TOL")
    if raw is None:
        return EPS_ZERO_DEFAULT
    value = float(raw)
    if not value > 0:
        raise ValueError(f"FG_TOL must be positive, got {raw!r}")
    return value
