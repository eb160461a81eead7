"""Dense brute-force oracles and the verification harness.

The oracles know nothing about V_n(b): they take an arbitrary dense matrix.
Exact variants work on object arrays of Fractions; float variants call
LAPACK through numpy.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from . import inverse as inv
from . import spectral as sp
from .matrix import (
    DEFAULT_ORACLE_CAP,
    TridiagonalParams,
    dense_materialize,
    dense_symmetrized,
    matvec_v,
    similarity_scaling,
)
from .repunit import repunit_exact
from .scalars import DomainError, LogScalar, as_base, check_mode, log_fraction

EXACT_ORACLE_CAP = 64

DEFAULT_NS = (1, 2, 3, 4, 8, 16, 32, 64)
DEFAULT_BS = ("1/4", "1/2", "999/1000", "1", "1001/1000", "2", "10", "49/4")

TOL_PRODUCT = 1e-11
TOL_RESIDUAL = 1e-12
TOL_ORTHOGONALITY = 1e-10
TOL_SPECTRUM = 1e-10
TOL_SIMILARITY = 1e-12
TOL_CHEBYSHEV = 1e-11
TOL_HYPERBOLIC = 1e-12
TOL_SOLVER = 1e-10


# -- dense oracles -----------------------------------------------------------


def _square(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {M.shape}")
    return M


def _exact_copy(M: np.ndarray) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in M]


def dense_lu_det(M, mode: str = "float"):
    """Determinant by Gaussian elimination.

    ``exact`` eliminates over the rationals with no rounding; ``float`` and
    ``log`` use LAPACK LU (``log`` returns (log|det|, sign)).
    """
    mode = check_mode(mode)
    M = _square(M)
    n = M.shape[0]
    if mode == "exact":
        A = _exact_copy(M)
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                det = -det
            det *= A[c][c]
            inv_p = 1 / A[c][c]
            for r in range(c + 1, n):
                if A[r][c] == 0:
                    continue
                f = A[r][c] * inv_p
                A[r] = [x - f * y if k >= c else x for k, (x, y) in enumerate(zip(A[r], A[c]))]
        return det
    F = np.asarray(M, dtype=np.float64)
    if mode == "log":
        sign, logdet = np.linalg.slogdet(F)
        return LogScalar(float(logdet), int(sign) if sign != 0 else 1)
    return float(np.linalg.det(F))


def dense_inverse(M, mode: str = "float") -> np.ndarray:
    """Inverse by Gauss-Jordan (exact) or LAPACK (float)."""
    mode = check_mode(mode, ("exact", "float"))
    M = _square(M)
    n = M.shape[0]
    if mode == "float":
        F = np.asarray(M, dtype=np.float64)
        try:
            return np.linalg.inv(F)
        except np.linalg.LinAlgError as exc:
            raise DomainError("matrix is singular") from exc
    A = _exact_copy(M)
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise DomainError("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        I[c], I[piv] = I[piv], I[c]
        inv_p = 1 / A[c][c]
        A[c] = [x * inv_p for x in A[c]]
        I[c] = [x * inv_p for x in I[c]]
        for r in range(n):
            if r == c or A[r][c] == 0:
                continue
            f = A[r][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
            I[r] = [x - f * y for x, y in zip(I[r], I[c])]
    return np.array(I, dtype=object)


def dense_solve(M, r) -> np.ndarray:
    return np.linalg.solve(np.asarray(M, dtype=np.float64), np.asarray(r, dtype=np.float64))


def dense_sym_eigs(M, cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending."""
    M = _square(M)
    if M.shape[0] > cap:
        raise DomainError(f"n = {M.shape[0]} exceeds the oracle cap {cap}")
    F = np.asarray(M, dtype=np.float64)
    if not np.array_equal(F, F.T):
        raise DomainError("matrix is not symmetric")
    return np.linalg.eigvalsh(F)


# -- verification harness ----------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    check: str
    n: int
    b: str
    mode: str
    passed: bool
    abs_error: float
    rel_error: float
    tolerance: float
    detail: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "VerificationReport":
        return cls(**json.loads(line))

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.check:<22} n={self.n:<5} b={self.b:<10} mode={self.mode:<5} "
            f"abs={self.abs_error:.3e} rel={self.rel_error:.3e} tol={self.tolerance:.1e}"
            + (f"  {self.detail}" if self.detail else "")
        )


def _sort_key(rep: VerificationReport):
    return rep.check, rep.n, Fraction(rep.b)


def _exact_params(n: int, b) -> TridiagonalParams:
    return TridiagonalParams(n, b if isinstance(b, Fraction) else Fraction(b))


def _rel(err: float, scale: float) -> float:
    return err / scale if scale else (0.0 if err == 0 else math.inf)


def _report(name, p, mode, abs_err, rel_err, tol, passed, detail=""):
    return VerificationReport(
        name, p.n, str(p.b), mode, bool(passed), float(abs_err), float(rel_err), float(tol), detail
    )


def _exact_verdict(name, p, mismatches: int, worst: Fraction, detail=""):
    return _report(name, p, "exact", float(abs(worst)), 0.0 if mismatches == 0 else math.inf,
                   0.0, mismatches == 0, detail)


def check_determinant(p: TridiagonalParams, exact_cap: int = EXACT_ORACLE_CAP, **_):
    p = _exact_params(p.n, p.b)
    det = sp.determinant_continuant(p, "exact")
    target = repunit_exact(p.n + 1, p.b)
    worst = det - target
    bad = int(worst != 0)
    detail = f"det={det}" if p.n <= 8 else ""
    if p.n <= exact_cap:
        lu = dense_lu_det(dense_materialize(p, "exact", cap=exact_cap), "exact")
        if lu != det:
            bad += 1
            worst = max(worst, det - lu, key=abs)
    return _exact_verdict("determinant", p, bad, worst, detail)


def check_product(p: TridiagonalParams, **_):
    got = sp.spectral_product(p, "log").log_magnitude
    want = log_fraction(repunit_exact(p.n + 1, _exact_params(p.n, p.b).b))
    err = abs(got - want)
    rel = _rel(err, abs(want))
    detail = f"prod={math.exp(got):.15g} R={math.exp(want):.15g}" if want < 700 else ""
    return _report("product", p, "log", err, rel, TOL_PRODUCT, rel <= TOL_PRODUCT, detail)


def _matvec_columns(p: TridiagonalParams, M: np.ndarray, mode: str) -> np.ndarray:
    out = np.empty_like(M)
    for c in range(M.shape[1]):
        out[:, c] = matvec_v(p, M[:, c], mode)
    return out


def check_inverse_exact(p: TridiagonalParams, exact_cap: int = EXACT_ORACLE_CAP, **_):
    p = _exact_params(p.n, p.b)
    if p.n > exact_cap:
        raise DomainError(f"n = {p.n} exceeds the exact oracle cap {exact_cap}")
    Minv = inv.inverse_dense(p, "exact", cap=exact_cap)
    prod = _matvec_columns(p, Minv, "exact")
    residual = prod - np.eye(p.n, dtype=int)
    bad = int(sum(1 for v in residual.flat if v != 0))
    worst = max(residual.flat, key=abs) if bad else Fraction(0)
    return _exact_verdict("inverse-exact", p, bad, worst)


def _probe_vector(n: int) -> np.ndarray:
    # deterministic, sign-changing, no exact zeros
    return np.cos(np.arange(1, n + 1) * 0.7) + 0.25


def check_solver_exact(p: TridiagonalParams, exact_cap: int = EXACT_ORACLE_CAP, **_):
    p = _exact_params(p.n, p.b)
    if p.n > exact_cap:
        raise DomainError(f"n = {p.n} exceeds the exact oracle cap {exact_cap}")
    x = [Fraction(k % 7 - 3, k % 5 + 1) for k in range(1, p.n + 1)]
    r = matvec_v(p, x, "exact")
    y_closed = inv.apply_inverse(p, r, "exact")
    y_thomas = inv.thomas_solve(p, r, "exact")
    diffs = [a - c for a, c in zip(y_closed, x)] + [a - c for a, c in zip(y_thomas, x)]
    bad = sum(1 for d in diffs if d != 0)
    worst = max(diffs, key=abs) if bad else Fraction(0)
    return _exact_verdict("solver-exact", p, bad, worst)


def check_solver_float(p: TridiagonalParams, **_):
    x = _probe_vector(p.n)
    r = matvec_v(p, x, "float")
    y_closed = inv.apply_inverse(p, r, "float")
    y_thomas = inv.thomas_solve(p, r, "float")
    err = float(np.max(np.abs(y_closed - y_thomas)))
    rel = _rel(err, float(np.max(np.abs(y_thomas))))
    return _report("solver-float", p, "float", err, rel, TOL_SOLVER, rel <= TOL_SOLVER)


def check_eigen_residual(p: TridiagonalParams, **_):
    worst_rel, worst_abs = 0.0, 0.0
    for k in range(1, p.n + 1):
        lam = sp.eigenvalue(p, k)
        v = sp.eigenvector(p, k)
        res = float(np.max(np.abs(matvec_v(p, v, "float") - lam * v)))
        rel = res / (lam * float(np.max(np.abs(v))))
        if rel > worst_rel:
            worst_rel, worst_abs = rel, res
    return _report("eigen-residual", p, "float", worst_abs, worst_rel, TOL_RESIDUAL,
                   worst_rel <= TOL_RESIDUAL)


def check_orthogonality(p: TridiagonalParams, **_):
    n = p.n
    V = np.column_stack([sp.eigenvector(p, k) for k in range(1, n + 1)])
    w = np.asarray(similarity_scaling(p).w, dtype=np.float64)
    G = V.T @ (w[:, None] * V)
    norms = np.sqrt(np.diag(G))
    C = np.abs(G) / np.outer(norms, norms)
    np.fill_diagonal(C, 0.0)
    A = np.abs(G.copy())
    np.fill_diagonal(A, 0.0)
    rel = float(C.max()) if n > 1 else 0.0
    return _report("orthogonality", p, "float", float(A.max()) if n > 1 else 0.0, rel,
                   TOL_ORTHOGONALITY, rel <= TOL_ORTHOGONALITY)


def check_spectrum_oracle(p: TridiagonalParams, cap: int = DEFAULT_ORACLE_CAP, **_):
    closed = np.sort(sp.spectrum(p).as_array())
    dense = dense_sym_eigs(dense_symmetrized(p, "float", cap=cap), cap=cap)
    err = float(np.max(np.abs(closed - dense)))
    return _report("spectrum-oracle", p, "float", err, _rel(err, float(np.max(dense))),
                   TOL_SPECTRUM, err <= TOL_SPECTRUM)


def check_self_adjoint(p: TridiagonalParams, exact_cap: int = EXACT_ORACLE_CAP, **_):
    p = _exact_params(p.n, p.b)
    V = dense_materialize(p, "exact", cap=exact_cap)
    w = similarity_scaling(p).w
    # W is diagonal: (V^T W)_{ij} = V_{ji} w_j and (W V)_{ij} = w_i V_{ij}
    lhs = V.T * w[None, :]
    rhs = w[:, None] * V
    diff = lhs - rhs
    bad = int(sum(1 for v in diff.flat if v != 0))
    worst = max(diff.flat, key=abs) if bad else Fraction(0)
    return _exact_verdict("self-adjoint", p, bad, worst)


def check_similarity(p: TridiagonalParams, cap: int = DEFAULT_ORACLE_CAP,
                     exact_cap: int = EXACT_ORACLE_CAP, **_):
    if p.sqrt_b_exact is not None and p.n <= exact_cap:
        d = similarity_scaling(p).d
        V = dense_materialize(p, "exact", cap=exact_cap)
        T = dense_symmetrized(p, "exact", cap=exact_cap)
        diff = V * d[None, :] / d[:, None] - T
        bad = int(sum(1 for v in diff.flat if v != 0))
        worst = max(diff.flat, key=abs) if bad else Fraction(0)
        return _exact_verdict("similarity", p, bad, worst)
    d = np.asarray(similarity_scaling(p).d, dtype=np.float64)
    V = dense_materialize(p, "float", cap=cap)
    T = dense_symmetrized(p, "float", cap=cap)
    err = float(np.max(np.abs(V * d[None, :] / d[:, None] - T)))
    tol = TOL_SIMILARITY * (p.b_float + 1.0)
    return _report("similarity", p, "float", err, err / (p.b_float + 1.0), tol, err <= tol)


def check_chebyshev(p: TridiagonalParams, **_):
    """Runs degrees m = 0..n at base b."""
    if p.sqrt_b_exact is not None:
        bad, worst = 0, Fraction(0)
        for m in range(p.n + 1):
            lhs, rhs = inv.cheb_repunit_identity(m, p.b, "exact")
            if lhs != rhs:
                bad += 1
                worst = max(worst, lhs - rhs, key=abs)
        return _exact_verdict("chebyshev", p, bad, worst, f"m=0..{p.n}")
    worst_rel, worst_abs = 0.0, 0.0
    for m in range(p.n + 1):
        lhs, rhs = inv.cheb_repunit_identity(m, p.b_float, "float")
        err = abs(lhs - rhs)
        if err / rhs > worst_rel:
            worst_rel, worst_abs = err / rhs, err
    return _report("chebyshev", p, "float", worst_abs, worst_rel, TOL_CHEBYSHEV,
                   worst_rel <= TOL_CHEBYSHEV, f"m=0..{p.n}")


def check_bounds(p: TridiagonalParams, **_):
    pe = _exact_params(p.n, p.b)
    det = repunit_exact(p.n + 1, pe.b)
    if pe.sqrt_b_exact is not None:
        lower, upper = sp.det_bounds(pe, "exact")
        if pe.b == 1:
            ok = lower == 0 and det == p.n + 1 and det < upper
        else:
            ok = lower < det < upper
        margin = float(min(det - lower, upper - det)) if ok else 0.0
        return _report("bounds", pe, "exact", 0.0 if ok else math.inf, 0.0, 0.0, ok,
                       f"lower={lower} det={det} upper={upper}" if p.n <= 4 else f"margin={margin:.3e}")
    lo, hi = sp.det_bounds(pe, "log")
    ld = log_fraction(det)
    ok = lo < ld < hi
    return _report("bounds", pe, "log", 0.0 if ok else math.inf, 0.0, 0.0, ok,
                   f"log lower={lo:.6g} det={ld:.6g} upper={hi:.6g}")


def check_hyperbolic(p: TridiagonalParams, **_):
    """Hyperbolic form at x = log(b)/2 (so that b = exp(2x))."""
    x = 0.5 * math.log(p.b_float)
    lhs, rhs = sp.hyperbolic_product(p.n, x)
    err = abs(lhs - rhs)
    rel = _rel(err, abs(rhs))
    return _report("hyperbolic", p, "float", err, rel, TOL_HYPERBOLIC, rel <= TOL_HYPERBOLIC,
                   f"x={x:.6g}")


CHECKS: dict[str, Callable[..., VerificationReport]] = {
    "bounds": check_bounds,
    "chebyshev": check_chebyshev,
    "determinant": check_determinant,
    "eigen-residual": check_eigen_residual,
    "hyperbolic": check_hyperbolic,
    "inverse-exact": check_inverse_exact,
    "orthogonality": check_orthogonality,
    "product": check_product,
    "self-adjoint": check_self_adjoint,
    "similarity": check_similarity,
    "solver-exact": check_solver_exact,
    "solver-float": check_solver_float,
    "spectrum-oracle": check_spectrum_oracle,
}

# checks that need rational dense work for every n and so obey the exact cap
EXACT_DENSE_CHECKS = {"inverse-exact", "self-adjoint", "solver-exact"}
DENSE_CHECKS = {"eigen-residual", "orthogonality", "spectrum-oracle", "similarity"}


def default_grid() -> list[tuple[int, Fraction]]:
    return [(n, as_base(b)) for n in DEFAULT_NS for b in DEFAULT_BS]


def run_verification(
    grid: Iterable[tuple[int, object]],
    checks: Optional[Iterable[str]] = None,
    cap: int = DEFAULT_ORACLE_CAP,
    exact_cap: int = EXACT_ORACLE_CAP,
) -> list[VerificationReport]:
    """One report per (check, grid point), sorted by check, n, b."""
    names = sorted(CHECKS) if checks is None else list(checks)
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise DomainError(f"unknown check(s) {unknown}; known: {sorted(CHECKS)}")
    points = [TridiagonalParams(n, b) for n, b in grid]
    for p in points:
        for name in names:
            if name in DENSE_CHECKS and p.n > cap:
                raise DomainError(f"check {name} at n = {p.n} exceeds the dense cap {cap}")
            if name in EXACT_DENSE_CHECKS and p.n > exact_cap:
                raise DomainError(
                    f"check {name} at n = {p.n} exceeds the exact oracle cap {exact_cap}"
                )
    reports = []
    for name in dict.fromkeys(names):
        for p in points:
            reports.append(CHECKS[name](p, cap=cap, exact_cap=exact_cap))
    reports.sort(key=_sort_key)
    return reports
