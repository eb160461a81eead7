"""Scalar modes shared by every module.

Three representations are in play:

* ``exact``: :class:`fractions.Fraction` (ints are promoted);
* ``float``: IEEE double;
* ``log``: a :class:`LogScalar` holding ``log|x|`` and the sign of ``x``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Literal, NamedTuple, Union

Mode = Literal["exact", "float", "log"]
MODES = ("exact", "float", "log")

Base = Union[Fraction, float]


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class LogScalar(NamedTuple):
    """A real number stored as its log-magnitude and a sign in {-1, +1}.

    Zero is ``LogScalar(-inf, +1)``.
    """

    log_magnitude: float
    sign: int = 1

    def to_float(self) -> float:
        if self.log_magnitude > 709.78:
            return math.copysign(math.inf, self.sign)
        return self.sign * math.exp(self.log_magnitude)


def check_mode(mode: str, allowed: tuple[str, ...] = MODES) -> str:
    if mode not in allowed:
        raise DomainError(f"mode {mode!r} not supported here; expected one of {allowed}")
    return mode


def as_base(b) -> Base:
    """Normalise a base to ``Fraction`` (exact input) or ``float``.

    Strings are read as exact rationals: ``"3/2"``, ``"7"`` and ``"1.5"``
    all become Fractions by their literal digits.
    """
    if isinstance(b, bool):
        raise DomainError("base must be a number, not a bool")
    if isinstance(b, str):
        try:
            b = Fraction(b.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse base {b!r}") from exc
    elif isinstance(b, Rational):
        b = Fraction(b)
    elif isinstance(b, float):
        if not math.isfinite(b):
            raise DomainError(f"base must be finite, got {b!r}")
    else:
        try:
            b = float(b)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"unsupported base type {type(b).__name__}") from exc
        if not math.isfinite(b):
            raise DomainError(f"base must be finite, got {b!r}")
    if b <= 0:
        raise DomainError(f"base must be > 0, got {b}")
    return b


def is_exact(b) -> bool:
    return isinstance(b, Fraction)


def require_exact(b) -> Fraction:
    if not isinstance(b, Fraction):
        raise DomainError("exact mode needs a rational base (int, Fraction or 'p/q' string)")
    return b


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if x < 0:
        raise DomainError("negative input")
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def log_fraction(x: Fraction) -> float:
    """Natural log of a positive rational, accurate to a few ulps at any size."""
    if x <= 0:
        raise DomainError("log of nonpositive value")
    if Fraction(1, 2) < x < 2:
        return math.log1p(float(x - 1))
    try:
        f = float(x)  # correctly rounded int division
    except OverflowError:
        f = math.inf
    if 1e-300 < f < math.inf:
        return math.log(f)
    # math.log accepts arbitrary-size ints; |result| is large here, so the
    # subtraction loses nothing relative to it
    return math.log(x.numerator) - math.log(x.denominator)


def format_scalar(x, digits: int = 15) -> str:
    """Render a scalar for terminal output (Fractions exactly)."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, LogScalar):
        return f"exp({x.log_magnitude:.{digits}g})" if x.sign > 0 else f"-exp({x.log_magnitude:.{digits}g})"
    return format(float(x), f".{digits}g")
