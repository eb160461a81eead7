"""Chebyshev polynomials of the second kind, their repunit form, and the
closed-form inverse of V_n(b).

The entries of the inverse are rational in b::

    (V^-1)_{ij} = (-1)**(i+j) R_i R_{n-j+1} / R_{n+1}              (i <= j)
    (V^-1)_{ij} = (-1)**(i+j) b**(i-j) R_j R_{n-i+1} / R_{n+1}     (i >= j)

:func:`apply_inverse` turns this into an O(n) solve with one prefix and one
suffix sum; :func:`thomas_solve` is plain tridiagonal elimination and serves
as its independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernels
from .matrix import DEFAULT_ORACLE_CAP, TridiagonalParams, _check_index, _resolve_mode, as_vector
from .repunit import check_length, repunit_exact, repunit_float, repunit_log, repunit_table
from .scalars import DomainError, as_base, check_mode, rational_sqrt


def chebyshev_u(m: int, x):
    """U_m(x) by U_{k+1} = 2x U_k - U_{k-1}; exact for Fraction x."""
    m = check_length(m, minimum=0)
    if isinstance(x, int):
        x = Fraction(x)
    one = Fraction(1) if isinstance(x, Fraction) else 1.0
    prev, cur = one, 2 * x
    if m == 0:
        return prev
    for _ in range(m - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def chebyshev_point(b):
    """x_b = (b + 1) / (2 sqrt(b)); exact when b is a rational square."""
    b = as_base(b)
    if isinstance(b, Fraction):
        s = rational_sqrt(b)
        if s is not None:
            return (b + 1) / (2 * s)
    b = float(b)
    return (b + 1.0) / (2.0 * math.sqrt(b))


def cheb_repunit_identity(m: int, b, mode: str = "float"):
    """(U_m(x_b), b**(-m/2) R_{m+1}(b)); the two sides are equal.

    ``exact`` needs b to be a rational square, so that sqrt(b) is rational.
    """
    m = check_length(m, minimum=0)
    mode = check_mode(mode, ("exact", "float"))
    b = as_base(b)
    if mode == "exact":
        s = rational_sqrt(b) if isinstance(b, Fraction) else None
        if s is None:
            raise DomainError(f"exact mode needs b to be a rational square, got {b}")
        x = (b + 1) / (2 * s)
        return chebyshev_u(m, x), repunit_exact(m + 1, b) / s ** m
    bf = float(b)
    lhs = chebyshev_u(m, chebyshev_point(bf))
    try:
        rhs = repunit_float(m + 1, bf) * bf ** (-0.5 * m)
    except OverflowError:
        rhs = math.exp(repunit_log(m + 1, bf).log_magnitude - 0.5 * m * math.log(bf))
    return lhs, rhs


@dataclass(frozen=True)
class InverseEntry:
    """One entry of V_n(b)^-1 with the factors that make it up.

    value = sign * b**b_power * R_{factors[0]} * R_{factors[1]} / R_{denominator_index}
    """

    i: int
    j: int
    value: object
    sign: int
    b_power: int
    factors: tuple
    denominator_index: int


def _entry_structure(n: int, i: int, j: int) -> tuple[int, int, tuple]:
    sign = -1 if (i + j) % 2 else 1
    if i <= j:
        return sign, 0, (i, n - j + 1)
    return sign, i - j, (j, n - i + 1)


def _float_entry(n: int, b: float, sign: int, power: int, factors: tuple) -> float:
    try:
        value = (
            b ** power
            * repunit_float(factors[0], b)
            * repunit_float(factors[1], b)
            / repunit_float(n + 1, b)
        )
        if math.isfinite(value):
            return sign * value
    except OverflowError:
        pass
    log_value = (
        power * math.log(b)
        + repunit_log(factors[0], b).log_magnitude
        + repunit_log(factors[1], b).log_magnitude
        - repunit_log(n + 1, b).log_magnitude
    )
    return sign * math.exp(log_value)


def inverse_entry_details(
    p: TridiagonalParams, i: int, j: int, mode: Optional[str] = None
) -> InverseEntry:
    i = _check_index(i, p.n, "row")
    j = _check_index(j, p.n, "column")
    mode = _resolve_mode(p, mode)
    sign, power, factors = _entry_structure(p.n, i, j)
    if mode == "exact":
        b = p.b
        value = (
            sign * b ** power * repunit_exact(factors[0], b) * repunit_exact(factors[1], b)
            / repunit_exact(p.n + 1, b)
        )
    else:
        value = _float_entry(p.n, p.b_float, sign, power, factors)
    return InverseEntry(i, j, value, sign, power, factors, p.n + 1)


def inverse_entry(p: TridiagonalParams, i: int, j: int, mode: Optional[str] = None):
    """(V_n(b)^-1)_{ij} from the repunit formula."""
    return inverse_entry_details(p, i, j, mode).value


def inverse_dense(
    p: TridiagonalParams, mode: Optional[str] = None, cap: int = DEFAULT_ORACLE_CAP
) -> np.ndarray:
    """Every closed-form entry of V_n(b)^-1, using one repunit table."""
    if p.n > cap:
        raise DomainError(f"n = {p.n} exceeds the dense cap {cap}")
    mode = _resolve_mode(p, mode)
    n = p.n
    if mode == "exact":
        R = repunit_table(n + 1, p.b)
        powers = [p.b ** k for k in range(n)]
        M = np.empty((n, n), dtype=object)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                sign, power, (a, c) = _entry_structure(n, i, j)
                M[i - 1, j - 1] = sign * powers[power] * R[a] * R[c] / R[n + 1]
        return M
    b = p.b_float
    M = np.empty((n, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            sign, power, factors = _entry_structure(n, i, j)
            M[i - 1, j - 1] = _float_entry(n, b, sign, power, factors)
    return M


def apply_inverse(p: TridiagonalParams, r, mode: Optional[str] = None) -> np.ndarray:
    """y = V_n(b)^-1 r in O(n) from the closed-form entries.

    Exact mode evaluates the prefix sums s_i = sum_{j<=i} (-1)**j b**-j R_j r_j
    and suffix sums t_i = sum_{j>=i} (-1)**j R_{n-j+1} r_j literally, then

        y_i = (-1)**i (b**i R_{n-i+1} s_{i-1} + R_i t_i) / R_{n+1}.

    Float mode runs the same sums rescaled to stay O(1) (see ``_kernels``).
    """
    mode = _resolve_mode(p, mode)
    n = p.n
    r = as_vector(r, n, mode)
    if mode == "float":
        y, finite = _kernels.apply_inverse_scaled(p.b_float, r)
        if not finite:
            raise OverflowError("closed-form solve left the float range; use exact mode")
        return y
    b = p.b
    R = repunit_table(n + 1, b)
    inv_b = 1 / b
    s = [Fraction(0)] * (n + 1)  # s[i] for i = 0..n
    w = Fraction(1)
    for i in range(1, n + 1):
        w *= inv_b
        term = w * R[i] * r[i - 1]
        s[i] = s[i - 1] - term if i % 2 else s[i - 1] + term
    t = [Fraction(0)] * (n + 2)  # t[i] for i = 1..n+1
    for i in range(n, 0, -1):
        term = R[n - i + 1] * r[i - 1]
        t[i] = t[i + 1] - term if i % 2 else t[i + 1] + term
    y = np.empty(n, dtype=object)
    bpow = Fraction(1)
    for i in range(1, n + 1):
        bpow *= b
        val = (bpow * R[n - i + 1] * s[i - 1] + R[i] * t[i]) / R[n + 1]
        y[i - 1] = -val if i % 2 else val
    return y


def thomas_solve(p: TridiagonalParams, r, mode: Optional[str] = None) -> np.ndarray:
    """Solve V_n(b) y = r by tridiagonal elimination, no pivoting.

    The pivots equal R_{k+1}(b)/R_k(b) > 0; a nonpositive pivot raises
    ArithmeticError rather than being divided by.
    """
    mode = _resolve_mode(p, mode)
    n = p.n
    r = as_vector(r, n, mode)
    if mode == "float":
        y, min_piv = _kernels.thomas(p.b_float, r)
        if not min_piv > 0.0:
            raise ArithmeticError(f"nonpositive pivot {min_piv} in tridiagonal elimination")
        return y
    b = p.b
    diag = b + 1
    c = [Fraction(0)] * n
    y = np.empty(n, dtype=object)
    piv = diag
    for i in range(n):
        if i > 0:
            piv = diag - b * c[i - 1]
        if piv <= 0:
            raise ArithmeticError(f"nonpositive pivot {piv} at row {i + 1}")
        c[i] = 1 / piv
        y[i] = (r[i] - b * y[i - 1]) * c[i] if i > 0 else r[i] * c[i]
    for i in range(n - 2, -1, -1):
        y[i] -= c[i] * y[i + 1]
    return y
