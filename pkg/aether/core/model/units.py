"""
Unit conversions used at configuration and report boundaries.

All internal computation is in linear watts; dBm and dB appear only when
reading configuration or writing reports. Scalars in, floats out; arrays in,
arrays out.
"""

import numpy as np

from aether.core.exceptions import DomainError


def _out(value, like):
    return value if np.ndim(like) else float(value)


def dbm_to_watts(x):
    """Convert dBm to watts."""
    return _out(np.power(10.0, (np.asarray(x, dtype=float) - 30.0) / 10.0), x)


def watts_to_dbm(p):
    """
    Convert watts to dBm.

    Raises:
        DomainError: if any value is not strictly positive and finite
    """
    arr = np.asarray(p, dtype=float)
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise DomainError(f"watts_to_dbm needs strictly positive finite power, got {p}")
    return _out(10.0 * np.log10(arr) + 30.0, p)


def db_to_linear(x):
    """Convert a dB ratio to linear scale."""
    return _out(np.power(10.0, np.asarray(x, dtype=float) / 10.0), x)


def linear_to_db(x):
    """
    Convert a linear ratio to dB.

    Raises:
        DomainError: if any value is not strictly positive
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise DomainError(f"linear_to_db needs a strictly positive ratio, got {x}")
    return _out(10.0 * np.log10(arr), x)
