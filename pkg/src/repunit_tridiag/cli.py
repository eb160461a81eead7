"""Command-line front end.

Exit codes: 0 success, 1 an identity or verification check failed,
2 bad usage or argument outside the domain.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import bench, oracle
from . import inverse as inv
from . import spectral as sp
from .matrix import DEFAULT_ORACLE_CAP, TridiagonalParams, dense_materialize, matvec_v
from .repunit import repunit_exact, repunit_float, repunit_log
from .scalars import DomainError, LogScalar, as_base, format_scalar, log_fraction


class UsageError(Exception):
    pass


def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, LogScalar):
        return {"log_magnitude": to_jsonable(x.log_magnitude), "sign": x.sign}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def dump_json(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True)


def _identity(name, passed, **fields):
    return {"name": name, "passed": bool(passed), **fields}


def _int(value, flag: str) -> int:
    if value is None:
        raise UsageError(f"{flag} is required")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{flag} must be an integer, got {value!r}") from None


def _base(args) -> Fraction:
    if args.b is None:
        raise UsageError("--b is required")
    return as_base(args.b)


def _params(args) -> TridiagonalParams:
    return TridiagonalParams(_int(args.n, "--n"), _base(args))


def _mode(args, default: str, allowed) -> str:
    mode = args.mode or default
    if mode not in allowed:
        raise UsageError(f"--mode {mode} not supported by this command; choose from {allowed}")
    return mode


def _rel_close(a: float, c: float, tol: float) -> tuple[bool, float]:
    err = abs(a - c) / abs(c) if c else abs(a - c)
    return err <= tol, err


# -- subcommands: each returns (json payload, text, ok) -----------------------


def cmd_repunit(args):
    m = _int(args.m, "--m")
    b = _base(args)
    mode = _mode(args, "exact", ("exact", "float", "log"))
    if mode == "exact":
        result = repunit_exact(m, b)
    elif mode == "float":
        result = repunit_float(m, float(b))
    else:
        result = repunit_log(m, float(b))
    payload = {"input": {"m": m, "b": b}, "mode": mode, "result": result, "identity_checks": []}
    return payload, format_scalar(result), True


def cmd_det(args):
    p = _params(args)
    mode = _mode(args, "exact", ("exact", "float", "log"))
    tol = args.tol if args.tol is not None else 1e-12
    det = sp.determinant_continuant(p, mode)
    if mode == "exact":
        target = repunit_exact(p.n + 1, p.b)
        ok, err = det == target, 0.0 if det == target else math.inf
    elif mode == "float":
        target = repunit_float(p.n + 1, p.b_float)
        ok, err = _rel_close(det, target, tol)
    else:
        target = repunit_log(p.n + 1, p.b_float)
        ok, err = _rel_close(det.log_magnitude, target.log_magnitude, tol)
    checks = [_identity("det == R_{n+1}(b)", ok, lhs=det, rhs=target, rel_error=err)]
    payload = {"input": {"n": p.n, "b": p.b}, "mode": mode, "result": det, "identity_checks": checks}
    return payload, format_scalar(det), ok


def cmd_spectrum(args):
    p = _params(args)
    _mode(args, "float", ("float",))
    tol = args.tol if args.tol is not None else oracle.TOL_PRODUCT
    eigs = sp.spectrum(p)
    values = list(eigs.values)
    ordered = all(a > c for a, c in zip(values, values[1:]))
    positive = all(v > eigs.lower_bound for v in values)
    got = sp.spectral_product(p, "log").log_magnitude
    want = log_fraction(repunit_exact(p.n + 1, p.b))
    ok_prod, err = _rel_close(got, want, tol)
    checks = [
        _identity("strictly decreasing", ordered),
        _identity("lambda_k > (sqrt(b)-1)^2", positive),
        _identity("log prod lambda_k == log R_{n+1}(b)", ok_prod, lhs=got, rhs=want, rel_error=err),
    ]
    ok = ordered and positive and ok_prod
    payload = {"input": {"n": p.n, "b": p.b}, "mode": "float", "result": values, "identity_checks": checks}
    return payload, " ".join(format_scalar(v) for v in values), ok


def cmd_eigvec(args):
    p = _params(args)
    _mode(args, "float", ("float", "log"))
    k = _int(args.k, "--k")
    tol = args.tol if args.tol is not None else oracle.TOL_RESIDUAL
    pair = sp.eigenpair(p, k, normalize=args.normalize)
    checks = []
    ok = True
    if pair.log_form:
        log_mag, sign = pair.log_vector
        result = {"log_magnitude": log_mag, "sign": sign}
        text = " ".join(
            ("0" if math.isinf(lm) else f"{'-' if s < 0 else ''}exp({lm:.15g})")
            for lm, s in zip(log_mag, sign)
        )
        mode = "log"
    else:
        v = pair.vector
        with np.errstate(over="ignore", invalid="ignore"):
            res = float(np.max(np.abs(matvec_v(p, v, "float") - pair.value * v)))
        rel = res / (pair.value * float(np.max(np.abs(v))))
        ok = rel <= tol
        checks.append(_identity("||V v - lambda v||_inf relative", ok, rel_error=rel))
        result = v
        text = " ".join(format_scalar(x) for x in v)
        mode = "float"
    payload = {
        "input": {"n": p.n, "b": p.b, "k": k, "normalize": bool(args.normalize)},
        "mode": mode,
        "result": {"eigenvalue": pair.value, "vector": result},
        "identity_checks": checks,
    }
    return payload, text, ok


def cmd_product_check(args):
    n = _int(args.n, "--n")
    if args.x is not None:
        tol = args.tol if args.tol is not None else oracle.TOL_HYPERBOLIC
        lhs, rhs = sp.hyperbolic_product(n, args.x)
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            lhs, rhs = sp.hyperbolic_product_log(n, args.x)
            name = "log prod (cosh x + cos) == log sinh((n+1)x)/(2^n sinh x)"
        else:
            name = "prod (cosh x + cos) == sinh((n+1)x)/(2^n sinh x)"
        ok, err = _rel_close(lhs, rhs, tol)
        inp = {"n": n, "x": args.x}
    else:
        p = TridiagonalParams(n, _base(args))
        tol = args.tol if args.tol is not None else oracle.TOL_PRODUCT
        want_exact = repunit_exact(n + 1, p.b)
        try:
            lhs = sp.spectral_product(p, "float")
            rhs = float(want_exact)
            name = "prod lambda_k == R_{n+1}(b)"
        except OverflowError:
            lhs = sp.spectral_product(p, "log").log_magnitude
            rhs = log_fraction(want_exact)
            name = "log prod lambda_k == log R_{n+1}(b)"
        ok, err = _rel_close(lhs, rhs, tol)
        inp = {"n": n, "b": p.b}
    checks = [_identity(name, ok, lhs=lhs, rhs=rhs, rel_error=err, tolerance=tol)]
    payload = {"input": inp, "mode": "float", "result": {"lhs": lhs, "rhs": rhs}, "identity_checks": checks}
    text = f"{'PASS' if ok else 'FAIL'} {name}: lhs={format_scalar(lhs)} rhs={format_scalar(rhs)} rel_error={err:.3e}"
    return payload, text, ok


def cmd_inverse(args):
    p = _params(args)
    mode = _mode(args, "exact", ("exact", "float"))
    i, j = _int(args.i, "--i"), _int(args.j, "--j")
    entry = inv.inverse_entry_details(p, i, j, mode)
    # column j of V V^-1 must be e_j
    col = [inv.inverse_entry(p, r, j, mode) for r in range(1, p.n + 1)]
    prod = matvec_v(p, col, mode)
    target = np.zeros(p.n)
    target[j - 1] = 1.0
    if mode == "exact":
        ok = all(v == t for v, t in zip(prod, target))
        err = 0.0 if ok else math.inf
    else:
        tol = args.tol if args.tol is not None else 1e-10
        err = float(np.max(np.abs(prod - target)))
        ok = err <= tol
    checks = [_identity("column j of V V^-1 == e_j", ok, max_error=err)]
    result = {
        "value": entry.value,
        "sign": entry.sign,
        "b_power": entry.b_power,
        "repunit_factors": list(entry.factors),
        "denominator_repunit": entry.denominator_index,
    }
    payload = {"input": {"n": p.n, "b": p.b, "i": i, "j": j}, "mode": mode, "result": result,
               "identity_checks": checks}
    return payload, format_scalar(entry.value), ok


def _read_rhs(path: str, mode: str):
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise UsageError(f"cannot read rhs file: {exc}") from None
    try:
        if mode == "exact":
            return [Fraction(ln) for ln in lines]
        return [float(Fraction(ln)) if "/" in ln else float(ln) for ln in lines]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rhs entry: {exc}") from None


def cmd_solve(args):
    p = _params(args)
    mode = _mode(args, "exact", ("exact", "float"))
    if args.rhs is None:
        raise UsageError("--rhs is required")
    r = _read_rhs(args.rhs, mode)
    if len(r) != p.n:
        raise UsageError(f"rhs has {len(r)} entries, expected n = {p.n}")
    solver = args.solver
    if solver == "thomas":
        y = inv.thomas_solve(p, r, mode)
    elif solver == "apply-inverse":
        y = inv.apply_inverse(p, r, mode)
    else:
        cap = args.oracle_cap
        if p.n > cap:
            raise UsageError(f"n = {p.n} exceeds the dense cap {cap}")
        if mode == "exact":
            M = oracle.dense_inverse(dense_materialize(p, "exact", cap=cap), "exact")
            y = M.dot(np.array(r, dtype=object))
        else:
            y = oracle.dense_solve(dense_materialize(p, "float", cap=cap), r)
    res = matvec_v(p, y, mode)
    if mode == "exact":
        ok = all(a == c for a, c in zip(res, r))
        err = 0.0 if ok else math.inf
    else:
        tol = args.tol if args.tol is not None else 1e-10
        rr = np.asarray(r, dtype=float)
        err = float(np.max(np.abs(res - rr))) / max(float(np.max(np.abs(rr))), 1e-300)
        ok = err <= tol
    checks = [_identity("V y == r", ok, rel_error=err)]
    payload = {"input": {"n": p.n, "b": p.b, "solver": solver, "rhs": r}, "mode": mode,
               "result": list(y), "identity_checks": checks}
    return payload, "\n".join(format_scalar(v) for v in y), ok


def _split(value, conv, flag):
    try:
        return [conv(v) for v in str(value).split(",") if v.strip()]
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad {flag} list {value!r}: {exc}") from None


def cmd_verify(args):
    cap = args.oracle_cap
    exact_cap = min(oracle.EXACT_ORACLE_CAP, cap)
    if args.preset == "default":
        grid = oracle.default_grid()
    elif args.preset is not None:
        raise UsageError(f"unknown preset {args.preset!r}")
    else:
        if args.n is None or args.b is None:
            raise UsageError("verify needs --preset default or both --n and --b")
        ns = _split(args.n, int, "--n")
        bs = _split(args.b, as_base, "--b")
        grid = [(n, b) for n in ns for b in bs]
    checks = _split(args.checks, str, "--checks") if args.checks else None
    reports = oracle.run_verification(grid, checks, cap=cap, exact_cap=exact_cap)
    ok = all(r.passed for r in reports)
    if args.json:
        text = "\n".join(r.to_json() for r in reports)
    else:
        failed = sum(not r.passed for r in reports)
        text = "\n".join(r.to_text() for r in reports)
        text += f"\n{len(reports) - failed}/{len(reports)} checks passed"
    return None, text, ok


def cmd_bench(args):
    sizes = _split(args.sizes, int, "--sizes")
    solvers = _split(args.solvers, str, "--solvers")
    b = args.b if args.b is not None else "2"
    mode = _mode(args, "float", ("float", "log"))
    rows = bench.run_bench(sizes, solvers, b=b, mode=mode, cap=args.oracle_cap, repeat=args.repeat)
    payload = {
        "input": {"sizes": sizes, "solvers": solvers, "b": as_base(b)},
        "mode": mode,
        "result": [
            {"solver": r.solver, "n": r.n, "ns_per_op": r.ns_per_op, "agreement": r.agreement}
            for r in rows
        ],
        "identity_checks": [_identity("solvers agree before timing", True)],
    }
    return payload, bench.format_table(rows), True


COMMANDS = {
    "repunit": cmd_repunit,
    "det": cmd_det,
    "spectrum": cmd_spectrum,
    "eigvec": cmd_eigvec,
    "product-check": cmd_product_check,
    "inverse": cmd_inverse,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", help="matrix order (comma list for verify)")
    common.add_argument("--b", help="base: integer, p/q or decimal (comma list for verify)")
    common.add_argument("--mode", choices=("exact", "float", "log"))
    common.add_argument("--tol", type=float, help="tolerance for float identity checks")
    common.add_argument("--json", action="store_true", help="emit structured JSON")
    common.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP,
                        help="largest n for dense oracles (default %(default)s)")

    parser = argparse.ArgumentParser(
        prog="vtri", description="Repunit tridiagonal matrices V_n(b): spectra, determinants, inverses."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("repunit", parents=[common], help="R_m(b) = 1 + b + ... + b^(m-1)")
    s.add_argument("--m", required=True)
    sub.add_parser("det", parents=[common], help="det V_n(b) by the continuant recurrence")
    sub.add_parser("spectrum", parents=[common], help="closed-form eigenvalues, index order")
    s = sub.add_parser("eigvec", parents=[common], help="closed-form eigenvector v^(k)")
    s.add_argument("--k", required=True)
    s.add_argument("--normalize", action="store_true", help="scale to unit W-norm")
    s = sub.add_parser("product-check", parents=[common], help="cosine-product identity")
    s.add_argument("--x", type=float, help="check the hyperbolic form at this x instead")
    s = sub.add_parser("inverse", parents=[common], help="closed-form entry of V_n(b)^-1")
    s.add_argument("--i", required=True)
    s.add_argument("--j", required=True)
    s = sub.add_parser("solve", parents=[common], help="solve V_n(b) y = r")
    s.add_argument("--rhs", required=True, help="file with one scalar per line")
    s.add_argument("--solver", choices=("thomas", "apply-inverse", "dense"), default="thomas")
    s = sub.add_parser("verify", parents=[common], help="run the oracle suite")
    s.add_argument("--preset", help="'default' for the built-in grid")
    s.add_argument("--checks", help=f"comma list from {', '.join(sorted(oracle.CHECKS))}")
    s = sub.add_parser("bench", parents=[common], help="time O(n) paths against dense oracles")
    s.add_argument("--sizes", default="256,1024,4096")
    s.add_argument("--solvers", default="thomas,apply-inverse")
    s.add_argument("--repeat", type=int, default=5)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, text, ok = COMMANDS[args.command](args)
    except (UsageError, DomainError, IndexError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except bench.GateError as exc:
        print(f"correctness gate failed: {exc}", file=sys.stderr)
        return 1
    if args.json and payload is not None:
        print(dump_json(payload))
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
