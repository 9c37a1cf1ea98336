"""Command-line driver: ``autoconv <command> [options]``.

Commands
--------
verify     recompute sup, c-constant and normalization of coefficient files
           and compare them against the bundled expectations manifest
bound      run the lower-bound certificate for a cosine polynomial G
qpbound    the quadratic-minimization limit of the kernel method
improve    LP fixpoint search from random starts
analytic   sup of f*f for a built-in power-law function
convolve   node samples of f*f as CSV

Every command is deterministic given its flags.  Reports are JSON documents
carrying a ``schema_version`` field.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import analytic, coeffio, lowerbound, qpbound, search
from .stepfn import StepFunction, autoconv_sup, autoconvolve, c_constant, l1, normalize

SCHEMA_VERSION = 1
STEP_FILES = ("step_n10.txt", "step_n20_c.txt", "step_n150_signed.txt", "step_n208.txt")

log = logging.getLogger("autoconv")


class UsageError(ValueError):
    pass


def load_manifest(path=None) -> dict:
    if path is None:
        text = coeffio.bundled_text("expectations.manifest")
    else:
        text = Path(path).read_text()
    manifest = json.loads(text)
    if manifest.get("schema_version") != 1:
        raise UsageError(f"unsupported manifest schema {manifest.get('schema_version')!r}")
    return manifest


def _check(quantity, value, rule) -> dict:
    row = {"quantity": quantity, "value": value}
    ok = True
    if "expected" in rule:
        row["expected"] = rule["expected"]
        row["tol"] = rule["tol"]
        ok = ok and abs(value - rule["expected"]) <= rule["tol"]
    if "min" in rule:
        row["min"] = rule["min"]
        ok = ok and value > rule["min"]
    row["ok"] = bool(ok)
    return row


def _step_summary(a: np.ndarray, signed: bool) -> dict:
    f = StepFunction(a, signed=signed)
    g = autoconvolve(f)
    n = f.n
    return {
        "n": n,
        "signed": signed,
        "sum": float(a.sum()),
        "sqrt2n": math.sqrt(2 * n),
        "sum_minus_sqrt2n": float(a.sum()) - math.sqrt(2 * n),
        "integral": f.integral(),
        "sup": autoconv_sup(f),
        "c_constant": c_constant(f),
        "l1_over_integral_sq": l1(g) / f.integral() ** 2,
    }


def verify_file(path_or_name, manifest: dict, signed=None) -> dict:
    name = Path(str(path_or_name)).name
    entry = manifest["entries"].get(name)
    a = coeffio.load_coefficients(path_or_name)
    if entry is not None and "delta" in entry:
        params = lowerbound.CertificateParams(entry["delta"], a)
        rep = lowerbound.certify(params)
        summary = {"n": a.size, "delta": entry["delta"], "gain": rep.gain,
                   "min_g": rep.min_g, "certified_bound": rep.certified_bound}
    else:
        if signed is None:
            signed = bool(entry["signed"]) if entry else bool(np.any(a < 0))
        summary = _step_summary(a, signed)
    checks = []
    if entry is not None:
        if entry.get("n") is not None and entry["n"] != a.size:
            checks.append({"quantity": "n", "value": a.size, "expected": entry["n"], "ok": False})
        for rule in entry.get("checks", []):
            checks.append(_check(rule["quantity"], summary[rule["quantity"]], rule))
    summary["file"] = name
    summary["checks"] = checks
    summary["ok"] = all(c["ok"] for c in checks)
    return summary


def cmd_verify(args) -> dict:
    manifest = load_manifest()
    paths = args.paths or list(STEP_FILES)
    signed = True if args.signed else None
    files = [verify_file(p, manifest, signed) for p in paths]
    return {"command": "verify", "files": files, "ok": all(f["ok"] for f in files)}


def _g_coeffs(path):
    if path is None:
        return coeffio.load_coefficients("g_delta0138_n119.txt")
    if not Path(path).exists() and str(path) not in coeffio.BUNDLED:
        raise UsageError(f"G-coefficient file not found: {path}")
    return coeffio.load_coefficients(path)


def cmd_bound(args) -> dict:
    delta = 0.138 if args.delta is None else args.delta
    params = lowerbound.CertificateParams(delta, _g_coeffs(args.g_file))
    rep = lowerbound.certify(params).to_dict()
    out = {"command": "bound"}
    out.update(rep)
    out["ok"] = not rep["diagnostics"]
    return out


def cmd_qpbound(args) -> dict:
    delta = 0.14 if args.delta is None else args.delta
    m = 400 if args.grid is None else args.grid
    tol = 1e-10 if args.tol is None else args.tol
    kw = {} if args.max_iter is None else {"max_iter": args.max_iter}
    res = qpbound.quadratic_min_bound(delta, m, rtol=tol, **kw)
    return {
        "command": "qpbound",
        "delta": delta,
        "grid": m,
        "q_value": res.q_value,
        "q_lower": res.q_lower,
        "gap": res.gap,
        "iterations": res.iterations,
        "bound": res.bound,
        "ok": True,
    }


def cmd_improve(args) -> dict:
    if args.n is None:
        raise UsageError("improve needs --n")
    tol = search.DEFAULT_TOL if args.tol is None else args.tol
    max_iter = search.DEFAULT_MAX_ITER if args.max_iter is None else args.max_iter
    trace = search.restart_harness(
        args.n, args.restarts, args.seed, tol=tol, max_iter=max_iter,
        workers=args.workers, signed=args.signed,
    )
    best = trace.best
    return {
        "command": "improve",
        "n": args.n,
        "seed": args.seed,
        "restarts": args.restarts,
        "signed": args.signed,
        "sup": trace.final_sup,
        "converged": trace.converged,
        "iterations": [
            {"sup": s, "lp_sum": None if math.isnan(b) else b, "t": t}
            for s, b, t in trace.iterations
        ],
        "coeffs": [float(v) for v in best.coeffs],
        "ok": True,
        "_best": best,
    }


def cmd_analytic(args) -> dict:
    pieces = analytic.builtin(args.which)
    grid = analytic.DEFAULT_GRID if args.grid is None else args.grid
    tol = analytic.DEFAULT_TOL if args.tol is None else args.tol
    sup, where = analytic.sup_autoconv(pieces, grid=grid, tol=tol)
    out = {
        "command": "analytic",
        "which": args.which,
        "grid": grid,
        "integral": analytic.total_integral(pieces),
        "sup": sup,
        "argmax": where,
        "ok": True,
    }
    if args.csv:
        xs = np.linspace(-0.5, 0.5, grid + 2)
        ys = [0.0] + [analytic.autoconv_at(pieces, x, tol) for x in xs[1:-1]] + [0.0]
        out["_csv"] = (xs, np.array(ys))
    return out


def cmd_convolve(args) -> dict:
    f = coeffio.load_step(args.path, signed=True if args.signed else None)
    g = autoconvolve(normalize(f, "unit-integral"))
    xs, ys = g.full_nodes()
    return {
        "command": "convolve",
        "file": Path(args.path).name,
        "n": f.n,
        "sup": autoconv_sup(f),
        "nodes": int(xs.size),
        "ok": True,
        "_csv": (xs, ys),
    }


def write_csv(path, xs, ys) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        for x, y in zip(xs, ys):
            w.writerow([repr(float(x)), repr(float(y))])


def _summary_lines(report: dict) -> list[str]:
    cmd = report["command"]
    if cmd == "verify":
        lines = []
        for f in report["files"]:
            key = "gain" if "gain" in f else "sup"
            extra = f" c={f['c_constant']:.5f}" if "c_constant" in f else ""
            status = "ok" if f["ok"] else "MISMATCH"
            lines.append(f"{f['file']}: n={f['n']} {key}={f[key]:.5f}{extra} [{status}]")
        return lines
    if cmd == "bound":
        return [
            f"min G = {report['min_g']:.7f}",
            f"gain = {report['gain']:.7f}",
            f"basic bound = {report['basic_bound']:.6f}",
            f"certified bound = {report['certified_bound']:.6f}",
        ]
    if cmd == "qpbound":
        return [f"delta={report['delta']} grid={report['grid']}: bound = {report['bound']:.6f}"]
    if cmd == "improve":
        best = report["_best"]
        return [coeffio.format_coefficients(
            best.coeffs, header=f"n={best.n} sup={report['sup']!r}").rstrip("\n")]
    if cmd == "analytic":
        return [f"{report['which']}: sup = {report['sup']:.6f} at x = {report['argmax']:.6f}"]
    return [f"{report['file']}: {report['nodes']} nodes, sup = {report['sup']:.6f}"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH", help="write a JSON report")
    common.add_argument("--csv", metavar="PATH", help="write (x, value) samples")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="autoconv", description="Bounds for sup |f*f|.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check coefficient files")
    s.add_argument("paths", nargs="*", help="files or bundled names (default: bundled step files)")
    s.add_argument("--signed", action="store_true", help="treat inputs as signed")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bound", parents=[common], help="lower-bound certificate")
    s.add_argument("--delta", type=float)
    s.add_argument("--g-file", help="G coefficients (default: bundled delta=0.138 list)")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("qpbound", parents=[common], help="quadratic-minimization bound")
    s.add_argument("--delta", type=float)
    s.add_argument("--grid", type=int, help="number of cells (default 400)")
    s.add_argument("--tol", type=float, help="relative Frank-Wolfe gap (default 1e-10)")
    s.add_argument("--max-iter", type=int)
    s.set_defaults(func=cmd_qpbound)

    s = sub.add_parser("improve", parents=[common], help="LP fixpoint search")
    s.add_argument("--n", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=1)
    s.add_argument("--tol", type=float)
    s.add_argument("--max-iter", type=int)
    s.add_argument("--signed", action="store_true", help="allow negative heights")
    s.add_argument("--workers", type=int, default=None, help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_improve)

    s = sub.add_parser("analytic", parents=[common], help="built-in power-law functions")
    s.add_argument("which", choices=sorted(analytic.BUILTIN))
    s.add_argument("--grid", type=int)
    s.add_argument("--tol", type=float)
    s.set_defaults(func=cmd_analytic)

    s = sub.add_parser("convolve", parents=[common], help="f*f node samples")
    s.add_argument("path", help="coefficient file or bundled name")
    s.add_argument("--signed", action="store_true")
    s.set_defaults(func=cmd_convolve)
    return p


def _validate(args) -> None:
    delta = getattr(args, "delta", None)
    if delta is not None and not 0 < delta <= 0.25:
        raise UsageError("--delta must lie in (0, 1/4]")
    n = getattr(args, "n", None)
    if n is not None and n < 1:
        raise UsageError("--n must be at least 1")
    if getattr(args, "restarts", 1) < 1:
        raise UsageError("--restarts must be at least 1")
    grid = getattr(args, "grid", None)
    if grid is not None and grid < 3:
        raise UsageError("--grid is too small")
    if args.csv and args.command not in ("analytic", "convolve", "improve"):
        raise UsageError(f"--csv is not available for {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _validate(args)
        report = args.func(args)
    except (UsageError, coeffio.CoefficientFileError, KeyError, FileNotFoundError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        print(f"autoconv: error: {msg}", file=sys.stderr)
        return 2
    if args.command == "improve" and args.csv:
        g = autoconvolve(normalize(report["_best"], "unit-integral"))
        report["_csv"] = g.full_nodes()
    for line in _summary_lines(report):
        print(line)
    if args.csv and "_csv" in report:
        write_csv(args.csv, *report["_csv"])
    if args.report:
        clean = {k: v for k, v in report.items() if not k.startswith("_")}
        clean = {"schema_version": SCHEMA_VERSION, **clean}
        Path(args.report).write_text(json.dumps(clean, indent=2) + "\n")
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
