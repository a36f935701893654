"""Smooth cutoff profiles used by the conformal constructions.

All profiles are built from the standard C-infinity transition
a(x) = exp(-1/x) (x > 0), giving exact plateaus and exact vanishing.
"""

from __future__ import annotations

import numpy as np


def _a(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smoothstep(x) -> np.ndarray:
    """C-infinity step: 0 for x <= 0, 1 for x >= 1, monotone between."""
    x = np.asarray(x, dtype=float)
    ax = _a(x)
    return ax / (ax + _a(1.0 - x))


def plateau(x, inner: float, outer: float) -> np.ndarray:
    """C-infinity bump of |x|: exactly 1 for |x| <= inner, 0 for |x| >= outer."""
    if not outer > inner >= 0:
        raise ValueError("need outer > inner >= 0")
    return smoothstep((outer - np.abs(x)) / (outer - inner))
