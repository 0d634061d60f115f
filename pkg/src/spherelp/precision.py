"""Working-precision control.

All core arithmetic runs on mpmath floats at a configurable number of
significant decimal digits (never below MIN_DPS).  Gegenbauer coefficients of
degree-20 products cancel far beyond what 64-bit floats can absorb, so the
default keeps a comfortable margin.  The default can be set once per process
via the SPHERELP_PRECISION environment variable or `set_working_dps`.
"""

import os
from contextlib import contextmanager

import mpmath as mp

from .errors import ArgumentError

MIN_DPS = 30
DEFAULT_DPS = 35

_dps = None


def get_working_dps() -> int:
    global _dps
    if _dps is None:
        env = os.environ.get("SPHERELP_PRECISION")
        _dps = _validate(int(env)) if env else DEFAULT_DPS
    return _dps


def set_working_dps(dps: int) -> None:
    global _dps
    _dps = _validate(dps)


def _validate(dps: int) -> int:
    if dps < MIN_DPS:
        raise ArgumentError(f"working precision must be >= {MIN_DPS} digits, got {dps}")
    return dps


def working(extra: int = 0):
    """Context manager entering the working precision (plus `extra` digits)."""
    return mp.workdps(get_working_dps() + extra)


@contextmanager
def boosted_precision(factor: int = 2):
    """Temporarily raise the working precision itself (nested `working()`
    calls and precision-keyed caches all see the boosted value)."""
    global _dps
    old = get_working_dps()
    _dps = old * factor
    try:
        with mp.workdps(_dps):
            yield
    finally:
        _dps = old


def root_tolerance():
    """Bracket-width tolerance for root refinement at working precision."""
    return mp.mpf(10) ** (-(get_working_dps() + 1))


def mpf(x) -> mp.mpf:
    """Convert to mpf; floats convert exactly, strings parse at working dps."""
    if isinstance(x, mp.mpf):
        return x
    if isinstance(x, str):
        with working():
            return mp.mpf(x)
    return mp.mpf(x)
