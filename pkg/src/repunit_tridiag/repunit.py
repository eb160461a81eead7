"""Repunits ``R_m(b) = 1 + b + ... + b**(m-1)`` for any base ``b > 0``.

``R_m(1) = m`` (the continuous extension), so every function here is
defined on the whole positive half-line.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .scalars import DomainError, LogScalar, as_base, require_exact

# Below this distance from 1 the closed form (b**m - 1)/(b - 1) is not used.
NEAR_ONE = 2.0 ** -20


def check_length(m, minimum: int = 1) -> int:
    if isinstance(m, bool) or not isinstance(m, int):
        raise DomainError(f"length must be an int, got {m!r}")
    if m < minimum:
        raise DomainError(f"length must be >= {minimum}, got {m}")
    return m


def repunit_exact(m: int, b) -> Fraction:
    """Exact geometric sum for a rational base.

    >>> repunit_exact(4, 2)
    Fraction(15, 1)
    >>> repunit_exact(3, "1/2")
    Fraction(7, 4)
    """
    m = check_length(m)
    b = require_exact(as_base(b))
    if b == 1:
        return Fraction(m)
    p, q = b.numerator, b.denominator
    # (b**m - 1)/(b - 1) with the denominators cleared
    return Fraction(p ** m - q ** m, q ** (m - 1) * (p - q))


def _horner(m: int, b: float) -> float:
    acc = 1.0
    for _ in range(m - 1):
        acc = acc * b + 1.0
    return acc


def repunit_float(m: int, b) -> float:
    """Floating-point repunit with relative error O(m) ulps.

    Raises OverflowError instead of returning ``inf``.
    """
    m = check_length(m)
    b = float(as_base(b))
    if b == 1.0:
        return float(m)
    try:
        if abs(b - 1.0) <= NEAR_ONE:
            value = _horner(m, b)
        elif 0.5 <= b <= 2.0:
            # b - 1 is exact here, and expm1/log1p avoid the cancellation in b**m - 1
            value = math.expm1(m * math.log1p(b - 1.0)) / (b - 1.0)
        else:
            value = (b ** m - 1.0) / (b - 1.0)
    except OverflowError:
        value = math.inf
    if math.isinf(value):
        raise OverflowError(
            f"R_{m}({b}) exceeds the float range; use exact or log mode"
        )
    return value


def repunit_log(m: int, b) -> LogScalar:
    """``log R_m(b)`` without overflow; the sign is always +1."""
    m = check_length(m)
    b = float(as_base(b))
    if m == 1:
        return LogScalar(0.0, 1)
    if b == 1.0:
        return LogScalar(math.log(m), 1)
    try:
        # R_m = 1 + b R_{m-1}, and log1p keeps precision when R_m is close to 1
        return LogScalar(math.log1p(b * repunit_float(m - 1, b)), 1)
    except OverflowError:
        pass
    # only reachable for b > 1, where b**-m has underflowed to nothing
    logb = math.log(b)
    value = m * logb - math.log(b - 1.0) + math.log1p(-math.exp(-m * logb))
    return LogScalar(value, 1)


def repunit_table(n: int, b) -> tuple[Fraction, ...]:
    """Exact ``(R_0, R_1, ..., R_n)`` with ``R_0 = 0``, in O(n) operations."""
    n = check_length(n, minimum=0)
    b = require_exact(as_base(b))
    table = [Fraction(0)]
    for _ in range(n):
        table.append(b * table[-1] + 1)
    return tuple(table)
