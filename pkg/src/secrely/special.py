"""Exponential integral E1(x) = int_x^inf exp(-t)/t dt for real x > 0.

Power series below x = 1, modified Lentz continued fraction above. The
continued fraction yields exp(x)*E1(x) directly, which is what the ergodic
capacity terms need when exp(x) alone would overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
_EPS = 2.220446049250313e-16
_TINY = 1e-300
_SERIES_CUTOFF = 1.0
_MAX_ITER = 1000


@dataclass(frozen=True)
class E1Result:
    value: float
    est_abs_error: float


def _check(x):
    if not x > 0 or math.isnan(x):
        raise DomainError(f"E1 requires x > 0, got {x!r}")


def _series(x):
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    total = 0.0
    mag = 0.0
    fact_term = 1.0
    k = 1
    while True:
        fact_term *= -x / k
        term = fact_term / k
        total += term
        mag += abs(term)
        if abs(term) <= _EPS * abs(total) or k >= _MAX_ITER:
            break
        k += 1
    value = -EULER_GAMMA - math.log(x) - total
    err = 2.0 * _EPS * (EULER_GAMMA + abs(math.log(x)) + mag) + abs(term) * x / (k + 1)
    return value, err


def _continued_fraction(x):
    """Return (exp(x)*E1(x), relative error estimate)."""
    b = x + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            return h, abs(delta - 1.0) + 4.0 * _EPS * math.sqrt(i)
    return h, abs(delta - 1.0)


def exp_integral_e1(x: float) -> E1Result:
    """E1(x) with an estimate of its absolute error.

    Underflows to exactly 0 (reported error 0) for x beyond about 740.
    """
    _check(x)
    if x <= _SERIES_CUTOFF:
        value, err = _series(x)
        return E1Result(value, err)
    scaled, rel = _continued_fraction(x)
    value = scaled * math.exp(-x)
    return E1Result(value, rel * value)


def exp_e1_product(x: float) -> float:
    """exp(x) * E1(x), finite for every positive x."""
    _check(x)
    if x <= _SERIES_CUTOFF:
        return math.exp(x) * _series(x)[0]
    return _continued_fraction(x)[0]


def log1p_laplace(alpha: float) -> float:
    """int_0^inf ln(1+x) exp(-x/alpha) dx = alpha * exp(1/alpha) * E1(1/alpha)."""
    return alpha * exp_e1_product(1.0 / alpha)
