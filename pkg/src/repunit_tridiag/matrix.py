"""Implicit representation of V_n(b), its symmetrised form T_n(b), and the
diagonal scalings D = diag(b**((i-1)/2)) and W = D**-2 relating them.

Nothing here stores an n x n array except :func:`dense_materialize` and
friends, which exist only to feed the dense oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .repunit import check_length
from .scalars import Base, DomainError, as_base, check_mode, rational_sqrt

DEFAULT_ORACLE_CAP = 256


@dataclass(frozen=True)
class TridiagonalParams:
    """The pair (n, b) that pins down V_n(b), T_n(b), D and W.

    ``b`` is normalised on construction: ints, Fractions and strings become
    Fractions (exact mode available); floats stay floats.
    """

    n: int
    b: Base

    def __post_init__(self):
        check_length(self.n)
        object.__setattr__(self, "b", as_base(self.b))

    @property
    def exact(self) -> bool:
        return isinstance(self.b, Fraction)

    @property
    def b_float(self) -> float:
        return float(self.b)

    @property
    def sqrt_b_exact(self) -> Optional[Fraction]:
        """Rational sqrt(b) when b is the square of a rational, else None."""
        if not self.exact:
            return None
        return rational_sqrt(self.b)

    def default_mode(self) -> str:
        return "exact" if self.exact else "float"


class RowEntries(NamedTuple):
    sub: Optional[Base]
    diag: Base
    sup: Optional[Base]


def _check_index(i, n: int, name: str = "index") -> int:
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
        raise DomainError(f"{name} must be an int, got {i!r}")
    if not 1 <= i <= n:
        raise IndexError(f"{name} {i} out of range 1..{n}")
    return int(i)


def _resolve_mode(p: TridiagonalParams, mode: Optional[str]) -> str:
    mode = p.default_mode() if mode is None else check_mode(mode, ("exact", "float"))
    if mode == "exact" and not p.exact:
        raise DomainError("exact mode needs a rational base (int, Fraction or 'p/q' string)")
    return mode


def _to_exact(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


def as_vector(x, n: int, mode: str) -> np.ndarray:
    """Coerce x to a length-n vector: float64, or an object array of Fractions."""
    if mode == "exact":
        if len(x) != n:
            raise DomainError(f"vector length {len(x)} != n = {n}")
        return np.array([_to_exact(v) for v in x], dtype=object)
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise DomainError(f"vector shape {arr.shape} != ({n},)")
    return arr


def row_entries(p: TridiagonalParams, i: int) -> RowEntries:
    """Row i of V_n(b) as (subdiagonal, diagonal, superdiagonal)."""
    i = _check_index(i, p.n, "row")
    b = p.b
    return RowEntries(b if i > 1 else None, b + 1, 1 if i < p.n else None)


def _tridiag_matvec(sub, diag, sup, x: np.ndarray) -> np.ndarray:
    if x.dtype != object:
        return _kernels.matvec_tridiag(float(sub), float(diag), float(sup), x)
    n = len(x)
    y = np.empty(n, dtype=object)
    for i in range(n):
        acc = diag * x[i]
        if i > 0:
            acc += sub * x[i - 1]
        if i < n - 1:
            acc += sup * x[i + 1]
        y[i] = acc
    return y


def matvec_v(p: TridiagonalParams, x, mode: Optional[str] = None) -> np.ndarray:
    """y = V_n(b) x in O(n): y_i = b x_{i-1} + (b+1) x_i + x_{i+1}."""
    mode = _resolve_mode(p, mode)
    x = as_vector(x, p.n, mode)
    b = p.b if mode == "exact" else p.b_float
    return _tridiag_matvec(b, b + 1, 1, x)


def matvec_t(p: TridiagonalParams, x, mode: Optional[str] = None) -> np.ndarray:
    """y = T_n(b) x, off-diagonals sqrt(b).

    Exact mode is only available when b is a rational square.
    """
    if mode is None:
        mode = "exact" if p.sqrt_b_exact is not None else "float"
    mode = _resolve_mode(p, mode)
    if mode == "exact":
        s = p.sqrt_b_exact
        if s is None:
            raise DomainError(f"sqrt({p.b}) is irrational; T_n(b) is float-only")
        x = as_vector(x, p.n, mode)
        return _tridiag_matvec(s, p.b + 1, s, x)
    x = as_vector(x, p.n, mode)
    s = math.sqrt(p.b_float)
    return _tridiag_matvec(s, p.b_float + 1.0, s, x)


@dataclass(frozen=True)
class SimilarityScaling:
    """Diagonals of D and W = D**-2.

    ``d`` is exact only when b is a rational square; ``w`` is exact whenever
    b is rational. ``log_d`` is always float and never overflows.
    """

    params: TridiagonalParams
    d: np.ndarray
    w: np.ndarray
    log_d: np.ndarray


def similarity_scaling(p: TridiagonalParams) -> SimilarityScaling:
    n = p.n
    idx = np.arange(n)
    log_d = 0.5 * idx * math.log(p.b_float)
    s = p.sqrt_b_exact
    if s is not None:
        d = np.array([s ** k for k in range(n)], dtype=object)
    else:
        with np.errstate(over="ignore", under="ignore"):
            d = np.power(p.b_float, 0.5 * idx)
    if p.exact:
        inv_b = 1 / p.b
        w = np.array([inv_b ** k for k in range(n)], dtype=object)
    else:
        with np.errstate(over="ignore", under="ignore"):
            w = np.power(p.b_float, -idx.astype(np.float64))
    for arr in (d, w, log_d):
        arr.flags.writeable = False
    return SimilarityScaling(p, d, w, log_d)


def weighted_inner(p: TridiagonalParams, x, y, mode: Optional[str] = None):
    """<x, y>_W = sum_i b**-(i-1) x_i y_i."""
    mode = _resolve_mode(p, mode)
    x = as_vector(x, p.n, mode)
    y = as_vector(y, p.n, mode)
    if mode == "exact":
        inv_b = 1 / p.b
        total = Fraction(0)
        w = Fraction(1)
        for xi, yi in zip(x, y):
            total += w * xi * yi
            w *= inv_b
        return total
    with np.errstate(over="ignore", under="ignore"):
        w = np.power(p.b_float, -np.arange(p.n, dtype=np.float64))
    return math.fsum(w * x * y)


def _check_cap(n: int, cap: int):
    if n > cap:
        raise DomainError(f"n = {n} exceeds the dense oracle cap {cap}")


def _dense_tridiag(n: int, sub, diag, sup, exact: bool) -> np.ndarray:
    if exact:
        M = np.full((n, n), Fraction(0), dtype=object)
    else:
        M = np.zeros((n, n))
    for i in range(n):
        M[i, i] = diag
        if i > 0:
            M[i, i - 1] = sub
        if i < n - 1:
            M[i, i + 1] = sup
    return M


def dense_materialize(
    p: TridiagonalParams, mode: Optional[str] = None, cap: int = DEFAULT_ORACLE_CAP
) -> np.ndarray:
    """Dense V_n(b); object array of Fractions in exact mode."""
    _check_cap(p.n, cap)
    mode = _resolve_mode(p, mode)
    if mode == "exact":
        return _dense_tridiag(p.n, p.b, p.b + 1, Fraction(1), True)
    b = p.b_float
    return _dense_tridiag(p.n, b, b + 1.0, 1.0, False)


def dense_symmetrized(
    p: TridiagonalParams, mode: Optional[str] = None, cap: int = DEFAULT_ORACLE_CAP
) -> np.ndarray:
    """Dense T_n(b); exact only for rational-square b."""
    _check_cap(p.n, cap)
    if mode is None:
        mode = "exact" if p.sqrt_b_exact is not None else "float"
    mode = _resolve_mode(p, mode)
    if mode == "exact":
        s = p.sqrt_b_exact
        if s is None:
            raise DomainError(f"sqrt({p.b}) is irrational; T_n(b) is float-only")
        return _dense_tridiag(p.n, s, p.b + 1, s, True)
    s = math.sqrt(p.b_float)
    return _dense_tridiag(p.n, s, p.b_float + 1.0, s, False)
