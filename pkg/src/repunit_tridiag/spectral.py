"""Closed-form spectral data of V_n(b).

Eigenvalues are ``b + 1 + 2 sqrt(b) cos(k pi / (n+1))`` for k = 1..n, in
index order (hence strictly descending). The eigenvector for index k is
``v_j = b**((j-1)/2) sin(j k pi / (n+1))``, and distinct eigenvectors are
orthogonal for the weighted inner product ``<x, y>_W``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .matrix import TridiagonalParams, _check_index
from .repunit import check_length
from .scalars import DomainError, LogScalar, check_mode, require_exact


def _sin_pi_ratio(num: int, den: int) -> float:
    """sin(num * pi / den), reducing the integer angle first.

    Exact zeros come out as 0.0 and the libm argument stays in [0, pi/2].
    """
    num %= 2 * den
    sign = 1.0
    if num > den:
        num -= den
        sign = -1.0
    if 2 * num > den:
        num = den - num
    if num == 0:
        return 0.0
    return sign * math.sin(num * math.pi / den)


def _eigenvalue(n: int, b: float, k: int) -> float:
    # b + 1 + 2s cos(theta) rewritten without cancellation, theta = k pi/(n+1):
    #   (s + 1)**2 - 4s sin(theta/2)**2   when theta <= pi/2
    #   (s - 1)**2 + 4s cos(theta/2)**2   otherwise
    s = math.sqrt(b)
    m = n + 1
    if 2 * k <= m:
        h = _sin_pi_ratio(k, 2 * m)
        return (s + 1.0) ** 2 - 4.0 * s * h * h
    h = _sin_pi_ratio(m - k, 2 * m)
    gap = (b - 1.0) / (s + 1.0)  # s - 1 without cancellation near b = 1
    return gap * gap + 4.0 * s * h * h


def eigenvalue(p: TridiagonalParams, k: int) -> float:
    k = _check_index(k, p.n, "eigenvalue index")
    return _eigenvalue(p.n, p.b_float, k)


@dataclass(frozen=True)
class Spectrum:
    """All n eigenvalues; ``values[k-1]`` is lambda_k."""

    params: TridiagonalParams
    values: tuple

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def value(self, k: int) -> float:
        return self.values[_check_index(k, self.params.n, "eigenvalue index") - 1]

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    @property
    def lower_bound(self) -> float:
        """(sqrt(b) - 1)**2, strictly below every eigenvalue."""
        b = self.params.b_float
        return ((b - 1.0) / (math.sqrt(b) + 1.0)) ** 2


def spectrum(p: TridiagonalParams) -> Spectrum:
    b = p.b_float
    return Spectrum(p, tuple(_eigenvalue(p.n, b, k) for k in range(1, p.n + 1)))


def _sine_vector(n: int, k: int) -> np.ndarray:
    return np.array([_sin_pi_ratio(j * k, n + 1) for j in range(1, n + 1)])


def eigenvector(
    p: TridiagonalParams, k: int, normalize: bool = False
) -> np.ndarray:
    """Raw eigenvector formula (or W-normalised with ``normalize=True``).

    The scaling b**((j-1)/2) overflows for large n log b; in that regime
    this raises OverflowError and :func:`eigenvector_log` should be used.
    """
    k = _check_index(k, p.n, "eigenvector index")
    u = _sine_vector(p.n, k)
    idx = np.arange(p.n)
    log_d = 0.5 * idx * math.log(p.b_float)
    if np.max(np.abs(log_d)) > 700.0:
        raise OverflowError(
            f"eigenvector scaling b**((j-1)/2) leaves the float range at n={p.n}; "
            "use eigenvector_log"
        )
    v = np.power(p.b_float, 0.5 * idx) * u
    if normalize:
        # ||v||_W = ||u||_2 because W = D**-2 cancels the scaling exactly
        v = v / math.sqrt(math.fsum(u * u))
    return v


def eigenvector_log(
    p: TridiagonalParams, k: int, normalize: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvector as (log|v_j|, sign(v_j)); zero entries are (-inf, +1)."""
    k = _check_index(k, p.n, "eigenvector index")
    u = _sine_vector(p.n, k)
    sign = np.where(u < 0, -1, 1).astype(np.int8)
    with np.errstate(divide="ignore"):
        log_mag = 0.5 * np.arange(p.n) * math.log(p.b_float) + np.log(np.abs(u))
    if normalize:
        log_mag = log_mag - 0.5 * math.log(math.fsum(u * u))
    log_mag.flags.writeable = False
    sign.flags.writeable = False
    return log_mag, sign


@dataclass(frozen=True)
class Eigenpair:
    """(lambda_k, v^(k)).

    ``vector`` holds float entries, or is None when they would overflow, in
    which case ``log_vector`` = (log-magnitudes, signs) is populated.
    """

    params: TridiagonalParams
    k: int
    value: float
    vector: Optional[np.ndarray]
    log_vector: Optional[tuple]
    normalized: bool = False

    @property
    def log_form(self) -> bool:
        return self.vector is None


def eigenpair(p: TridiagonalParams, k: int, normalize: bool = False) -> Eigenpair:
    value = eigenvalue(p, k)
    try:
        v = eigenvector(p, k, normalize)
        v.flags.writeable = False
        return Eigenpair(p, k, value, v, None, normalize)
    except OverflowError:
        return Eigenpair(p, k, value, None, eigenvector_log(p, k, normalize), normalize)


def determinant_continuant(p: TridiagonalParams, mode: Optional[str] = None):
    """det V_n(b) from the continuant Delta_k = (b+1) Delta_{k-1} - b Delta_{k-2}.

    exact: Fraction (integer recurrence with b = P/Q's denominator cleared);
    float: float, OverflowError when out of range; log: LogScalar.
    """
    mode = check_mode(p.default_mode() if mode is None else mode)
    n = p.n
    if mode == "exact":
        b = require_exact(p.b)
        P, Q = b.numerator, b.denominator
        # D_k = Q**k Delta_k obeys D_k = (P+Q) D_{k-1} - P Q D_{k-2}
        a, pq = P + Q, P * Q
        prev, cur = 1, a
        for _ in range(n - 1):
            prev, cur = cur, a * cur - pq * prev
        return Fraction(cur, Q ** n)
    b = p.b_float
    # ratio form: Delta_k / Delta_{k-1} = 1 + e_k with e_1 = b and
    # e_k = b e_{k-1} / (1 + e_{k-1}); only positive quantities are combined,
    # unlike the three-term recurrence, which cancels badly near b = 1
    e = b
    if mode == "float":
        cur = 1.0 + e
        for _ in range(n - 1):
            e = b * e / (1.0 + e)
            cur *= 1.0 + e
            if math.isinf(cur):
                raise OverflowError(
                    f"det V_{n}({b}) exceeds the float range; use exact or log mode"
                )
        return cur
    logs = [math.log1p(e)]
    for _ in range(n - 1):
        e = b * e / (1.0 + e)
        logs.append(math.log1p(e))
    return LogScalar(math.fsum(logs), 1)


def spectral_product(p: TridiagonalParams, mode: str = "float"):
    """Product of the closed-form eigenvalues (equal to R_{n+1}(b))."""
    mode = check_mode(mode, ("float", "log"))
    values = spectrum(p).values
    if mode == "log":
        return LogScalar(math.fsum(math.log(v) for v in values), 1)
    prod = 1.0
    for v in values:
        prod *= v
    if math.isinf(prod):
        raise OverflowError(
            f"eigenvalue product for n={p.n} exceeds the float range; use log mode"
        )
    return prod


def _log_sinh(y: float) -> float:
    """log(sinh(y)) for y > 0."""
    if y > 20.0:
        return y - math.log(2.0) + math.log1p(-math.exp(-2.0 * y))
    return math.log(math.sinh(y))


def hyperbolic_product_log(n: int, x: float) -> tuple[float, float]:
    """Logs of both sides of prod_k (cosh x + cos(k pi/(n+1))) = sinh((n+1)x) / (2**n sinh x)."""
    n = check_length(n)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    m = n + 1
    sh = math.sinh(0.5 * x)
    sh2 = sh * sh
    terms = []
    for k in range(1, m):
        # cosh x + cos t = 2 (sinh(x/2)**2 + cos(t/2)**2)
        c = _sin_pi_ratio(m - k, 2 * m)
        terms.append(math.log(2.0 * (sh2 + c * c)))
    lhs = math.fsum(terms)
    if x == 0.0:
        rhs = math.log(m) - n * math.log(2.0)
    else:
        ax = abs(x)
        rhs = _log_sinh(m * ax) - n * math.log(2.0) - _log_sinh(ax)
    return lhs, rhs


def hyperbolic_product(n: int, x: float) -> tuple[float, float]:
    """Both sides of prod_k (cosh x + cos(k pi/(n+1))) = sinh((n+1)x)/(2**n sinh x).

    At x = 0 the right side is its limit (n+1)/2**n. Results that do not fit a
    float are inf; :func:`hyperbolic_product_log` gives their logs.
    """
    n = check_length(n)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    m = n + 1
    if m * abs(x) > 700.0:
        lhs, rhs = hyperbolic_product_log(n, x)
        return LogScalar(lhs).to_float(), LogScalar(rhs).to_float()
    sh = math.sinh(0.5 * x)
    sh2 = sh * sh
    lhs = 1.0
    for k in range(1, m):
        c = _sin_pi_ratio(m - k, 2 * m)
        lhs *= 2.0 * (sh2 + c * c)
    if x == 0.0:
        rhs = m / 2.0 ** n
    else:
        rhs = math.sinh(m * x) / (2.0 ** n * math.sinh(x))
    return lhs, rhs


def det_bounds(p: TridiagonalParams, mode: Optional[str] = None):
    """((sqrt(b) - 1)**(2n), (sqrt(b) + 1)**(2n)).

    For b != 1 the determinant lies strictly between them; at b = 1 the lower
    bound is 0 and says nothing. ``exact`` works for rational-square b only;
    ``log`` returns the two logarithms (lower = -inf at b = 1).
    """
    if mode is None:
        mode = "exact" if p.sqrt_b_exact is not None else "float"
    mode = check_mode(mode)
    n2 = 2 * p.n
    if mode == "exact":
        s = p.sqrt_b_exact
        if s is None:
            raise DomainError(f"sqrt({p.b}) is irrational; use float or log mode")
        return (s - 1) ** n2, (s + 1) ** n2
    b = p.b_float
    s = math.sqrt(b)
    gap = abs(b - 1.0) / (s + 1.0)
    if mode == "log":
        lower = -math.inf if gap == 0.0 else n2 * math.log(gap)
        return lower, n2 * math.log1p(s)
    try:
        return gap ** n2, (s + 1.0) ** n2
    except OverflowError:
        raise OverflowError(
            f"bounds for n={p.n} exceed the float range; use log mode"
        ) from None
