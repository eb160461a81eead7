"""Timing of the O(n) paths against the dense O(n^3) oracles.

Every run first checks that the requested solvers agree; no timing is
reported for a configuration that fails that gate.
"""

from __future__ import annotations

import math
import timeit
from dataclasses import dataclass

import numpy as np

from . import inverse as inv
from . import oracle
from .matrix import DEFAULT_ORACLE_CAP, TridiagonalParams, dense_materialize, matvec_v
from .scalars import DomainError, check_mode
from .spectral import determinant_continuant

SOLVE_SOLVERS = ("thomas", "apply-inverse", "dense")
DET_SOLVERS = ("continuant", "dense-det")
DENSE_SOLVERS = {"dense", "dense-det"}

SOLVE_TOL = 1e-10
LOG_DET_TOL = 1e-9


class GateError(RuntimeError):
    """Solvers disagreed before timing."""


@dataclass(frozen=True)
class BenchRow:
    solver: str
    n: int
    seconds: float
    agreement: float

    @property
    def ns_per_op(self) -> float:
        return self.seconds * 1e9

    @property
    def ns_per_row(self) -> float:
        return self.seconds * 1e9 / self.n


def best_time(fn, repeat: int = 5, min_seconds: float = 0.02) -> float:
    """Best per-call wall time over ``repeat`` batches of auto-sized length."""
    fn()  # warm-up (JIT compilation, caches)
    number = 1
    while True:
        t = timeit.timeit(fn, number=number)
        if t >= min_seconds or number >= 1 << 20:
            break
        number *= 2 if t * 10 >= min_seconds else 10
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def _probe(n: int) -> np.ndarray:
    return np.cos(np.arange(1, n + 1) * 0.7) + 0.25


def _solve_callables(p: TridiagonalParams, solvers, r, cap: int):
    fns = {}
    for name in solvers:
        if name == "thomas":
            fns[name] = lambda: inv.thomas_solve(p, r, "float")
        elif name == "apply-inverse":
            fns[name] = lambda: inv.apply_inverse(p, r, "float")
        elif name == "dense":
            M = dense_materialize(p, "float", cap=cap)
            fns[name] = lambda M=M: oracle.dense_solve(M, r)
    return fns


def _det_callables(p: TridiagonalParams, solvers, mode: str, cap: int):
    fns = {}
    for name in solvers:
        if name == "continuant":
            fns[name] = lambda: determinant_continuant(p, mode)
        elif name == "dense-det":
            M = dense_materialize(p, "float", cap=cap)
            fns[name] = lambda M=M: oracle.dense_lu_det(M, mode)
    return fns


def _det_value(v, mode: str) -> float:
    return v.log_magnitude if mode == "log" else float(v)


def run_bench(
    sizes,
    solvers,
    b="2",
    mode: str = "float",
    cap: int = DEFAULT_ORACLE_CAP,
    repeat: int = 5,
    min_seconds: float = 0.02,
) -> list[BenchRow]:
    """Gate, then time, each solver at each size.

    Raises DomainError for unknown solvers or a dense solver above ``cap``,
    and GateError when results disagree beyond tolerance.
    """
    mode = check_mode(mode, ("float", "log"))
    solvers = list(dict.fromkeys(solvers))
    unknown = [s for s in solvers if s not in SOLVE_SOLVERS + DET_SOLVERS]
    if unknown:
        raise DomainError(f"unknown solver(s) {unknown}")
    for n in sizes:
        if n > cap and DENSE_SOLVERS.intersection(solvers):
            raise DomainError(f"size {n} exceeds the dense cap {cap}")
    solve_names = [s for s in solvers if s in SOLVE_SOLVERS]
    det_names = [s for s in solvers if s in DET_SOLVERS]

    rows = []
    for n in sizes:
        p = TridiagonalParams(n, b)
        if solve_names:
            r = matvec_v(p, _probe(n), "float")
            fns = _solve_callables(p, solve_names, r, cap)
            results = {name: fn() for name, fn in fns.items()}
            ref = results[solve_names[0]]
            scale = float(np.max(np.abs(ref)))
            for name in solve_names:
                err = float(np.max(np.abs(results[name] - ref))) / scale
                if not err <= SOLVE_TOL:
                    raise GateError(f"{name} disagrees with {solve_names[0]} at n={n}: {err:.3e}")
                rows.append(BenchRow(name, n, best_time(fns[name], repeat, min_seconds), err))
        if det_names:
            fns = _det_callables(p, det_names, mode, cap)
            try:
                results = {name: _det_value(fn(), mode) for name, fn in fns.items()}
            except OverflowError as exc:
                raise DomainError(f"{exc} (n={n}); rerun with --mode log") from None
            ref = results[det_names[0]]
            tol = LOG_DET_TOL if mode == "log" else SOLVE_TOL
            for name in det_names:
                err = abs(results[name] - ref) / max(abs(ref), 1e-300)
                if not (math.isfinite(err) and err <= tol):
                    raise GateError(f"{name} disagrees with {det_names[0]} at n={n}: {err:.3e}")
                rows.append(BenchRow(name, n, best_time(fns[name], repeat, min_seconds), err))
    return rows


def format_table(rows: list[BenchRow]) -> str:
    lines = [f"{'solver':<14} {'n':>6} {'ns/op':>14} {'ns/row':>10} {'agreement':>10}"]
    for row in rows:
        lines.append(
            f"{row.solver:<14} {row.n:>6} {row.ns_per_op:>14.0f} {row.ns_per_row:>10.1f} "
            f"{row.agreement:>10.1e}"
        )
    return "\n".join(lines)
