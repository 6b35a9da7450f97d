"""erfc / erfcinv without scipy.

``erfc`` is the C library routine exposed by :mod:`math`.  ``erfcinv`` starts
from the normal quantile rational approximation in :mod:`statistics` and
polishes it with Halley steps on ``erfc`` itself.
"""

from __future__ import annotations

import math
from statistics import NormalDist

_STD_NORMAL = NormalDist()
_SQRT2 = math.sqrt(2.0)
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)

erfc = math.erfc


def erfcinv(y: float) -> float:
    """Inverse of erfc on (0, 2); +inf at 0 and -inf at 2."""
    if not 0.0 <= y <= 2.0 or math.isnan(y):
        raise ValueError(f"erfcinv argument must lie in [0, 2], got {y}")
    if y == 0.0:
        return math.inf
    if y == 2.0:
        return -math.inf
    x = -_STD_NORMAL.inv_cdf(y / 2.0) / _SQRT2
    for _ in range(2):
        err = math.erfc(x) - y
        if err == 0.0:
            break
        slope = -_TWO_OVER_SQRT_PI * math.exp(-x * x)
        if slope == 0.0:
            break
        step = err / slope
        # Halley correction; erfc'' = -2 x erfc'
        x -= step / (1.0 + x * step)
    return x


def erfinv(y: float) -> float:
    if not -1.0 <= y <= 1.0:
        raise ValueError(f"erfinv argument must lie in [-1, 1], got {y}")
    return erfcinv(1.0 - y)
