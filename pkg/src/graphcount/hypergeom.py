"""Gauss hypergeometric series 2F1, including the terminating case with c <= 0."""
from __future__ import annotations

import math

from scipy import special


class HypergeometricError(ValueError):
    pass


def _nonpositive_int(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss series sum_k (a)^(k) (b)^(k) / (c)^(k) z^k / k!.

    A non-positive integer ``a`` or ``b`` truncates the series after
    ``min(-a, -b)`` terms, summed directly here; in that case ``c`` may itself
    be a negative integer provided ``min(a, b) >= c`` (scipy returns nan for
    some of these). Otherwise ``c`` must not be a non-positive integer,
    ``|z| < 1``, and scipy evaluates the series.
    """
    stops = [int(-v) for v in (a, b) if _nonpositive_int(v)]
    if stops:
        last = min(stops)
        if _nonpositive_int(c) and min(a, b) < c:
            raise HypergeometricError(f"2F1 undefined: c={c} exceeds min(a, b)={min(a, b)}")
        if _nonpositive_int(c) and not (_nonpositive_int(a) and _nonpositive_int(b)):
            raise HypergeometricError("c <= 0 requires both a and b to be non-positive integers")
        total, term = 1.0, 1.0
        for k in range(last):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
            total += term
        return total
    if _nonpositive_int(c):
        raise HypergeometricError(f"2F1 undefined for c={c}")
    if abs(z) >= 1:
        raise HypergeometricError(f"series diverges or converges too slowly at |z|={abs(z)}")
    value = float(special.hyp2f1(a, b, c, z))
    if not math.isfinite(value):
        raise HypergeometricError(f"2F1({a}, {b}; {c}; {z}) could not be evaluated")
    return value


def log_hyp2f1(a: float, b: float, c: float, z: float) -> float:
    value = hyp2f1(a, b, c, z)
    if value <= 0:
        raise HypergeometricError("2F1 value is not positive; log undefined")
    return math.log(value)
