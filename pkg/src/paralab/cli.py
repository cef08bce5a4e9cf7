"""Command-line interface: ``paralab <command> ...``.

Exit codes: 0 success, 1 assertion failure under ``--assert``, 2 usage or
manifest error, 3 numeric degeneracy (no usable sample points).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import classify as cl
from .charts import axiom_report
from .curvature import curvature_frame, sectional
from .errors import DegenerateMetricError, ManifestError, ParalabError, SamplingError
from .gallery import get_chart, list_charts
from .levi_civita import geometry
from .manifest import read_manifest_file

EXIT_OK = 0
EXIT_ASSERT = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

SUITES = ("axioms", "curvature", "lemma3", "phi", "lemma5", "ricci", "corollary", "all")


class _UsageError(Exception):
    pass


# --- deterministic JSON ----------------------------------------------------------------

def _fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0.0"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps_json(obj, indent=2):
    """Serialize with fixed key order and 17 significant digits for floats."""
    out = []

    def emit(v, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if v is None:
            out.append("null")
        elif isinstance(v, (bool, np.bool_)):
            out.append("true" if v else "false")
        elif isinstance(v, (int, np.integer)):
            out.append(str(int(v)))
        elif isinstance(v, (float, np.floating)):
            out.append(_fmt_float(v))
        elif isinstance(v, str):
            out.append(json.dumps(v))
        elif isinstance(v, dict):
            if not v:
                out.append("{}")
                return
            out.append("{\n")
            for k, (key, item) in enumerate(v.items()):
                out.append(pad + json.dumps(str(key)) + ": ")
                emit(item, level + 1)
                out.append(",\n" if k < len(v) - 1 else "\n")
            out.append(end + "}")
        elif isinstance(v, (list, tuple, np.ndarray)):
            v = list(v)
            if not v:
                out.append("[]")
                return
            if all(isinstance(e, (int, float, np.number)) and not isinstance(e, bool) for e in v):
                out.append("[")
                for k, e in enumerate(v):
                    emit(e, level + 1)
                    if k < len(v) - 1:
                        out.append(", ")
                out.append("]")
                return
            out.append("[\n")
            for k, e in enumerate(v):
                out.append(pad)
                emit(e, level + 1)
                out.append(",\n" if k < len(v) - 1 else "\n")
            out.append(end + "]")
        else:
            raise TypeError(f"cannot serialize {type(v).__name__}")

    emit(obj, 0)
    return "".join(out) + "\n"


def _identity_dict(row):
    return {
        "tier": row.tier,
        "identity": row.identity,
        "applicable": row.applicable,
        "max_residual": row.max_residual,
        "worst_point": row.worst_point,
        "tol": row.tol_used,
        "passed": row.passed,
    }


def report_to_dict(report):
    """JSON-ready mapping of a :class:`ClassificationReport`."""
    return {
        "chart": report.chart,
        "epsilon": report.epsilon,
        "samples": {
            "count": report.count,
            "seed": report.seed,
            "tol": report.tol,
            "attempts": report.attempts,
            "domain": [list(iv) for iv in report.domain],
            "points": [list(p) for p in report.points],
        },
        "index_histogram": {str(k): v for k, v in report.index_histogram.items()},
        "properties": [
            {
                "property": p.property,
                "status": p.status,
                "max_residual": p.max_residual,
                "min_residual": p.min_residual,
                "worst_point": p.worst_point,
                "tol": p.tol_used,
            }
            for p in report.properties
        ],
        "identities": [_identity_dict(r) for r in report.identities],
        "audit": [{"rule": v.rule, "detail": v.detail} for v in report.audit],
    }


# --- target resolution -----------------------------------------------------------------

def resolve_target(target):
    """``(chart, expected)`` for a gallery name or a manifest path."""
    if target in list_charts():
        entry = get_chart(target)
        return entry.chart, entry.expected
    if os.path.exists(target):
        return read_manifest_file(target)
    raise _UsageError(f"{target!r} is neither a gallery chart nor a manifest file")


# --- text rendering --------------------------------------------------------------------

def _num(x):
    return "-" if x is None else f"{x:.3e}"


def _render_report(report, expected):
    lines = [
        f"chart {report.chart}  epsilon {report.epsilon:+d}  "
        f"points {report.count}  seed {report.seed}  tol {report.tol:g}",
        "index histogram: " + ", ".join(f"{k}:{v}" for k, v in report.index_histogram.items()),
        "",
        f"{'property':32} {'status':7} {'max residual':>13} {'min residual':>13}  expected",
    ]
    exp = dict(expected)
    for p in report.properties:
        mark = ""
        if p.property in exp:
            mark = exp[p.property] + ("" if exp[p.property] == p.status else "  MISMATCH")
        lines.append(
            f"{p.property:32} {p.status:7} {_num(p.max_residual):>13} {_num(p.min_residual):>13}  {mark}"
        )
    if report.identities:
        lines += ["", *_render_identities(report.identities)]
    lines.append("")
    if report.audit:
        lines.append("implication audit:")
        lines += [f"  {v.rule}: {v.detail}" for v in report.audit]
    else:
        lines.append("implication audit: clean")
    return "\n".join(lines) + "\n"


def _render_identities(rows):
    lines = [f"{'tier':10} {'identity':40} {'max residual':>13} {'tol':>8}  result"]
    for r in rows:
        if not r.applicable:
            verdict = "n/a"
        else:
            verdict = "pass" if r.passed else "FAIL"
        lines.append(f"{r.tier:10} {r.identity:40} {_num(r.max_residual):>13} {r.tol_used:>8.0e}  {verdict}")
    return lines


def _matrix(a):
    return "\n".join("  [" + ", ".join(f"{v: .10g}" for v in row) + "]" for row in a)


def _nonzero(arr, label, names, tol=1e-14):
    out = []
    for idx in zip(*np.nonzero(np.abs(arr) > tol)):
        out.append(f"  {label}[{','.join(names[i] for i in idx)}] = {arr[idx]:.12g}")
    return out or ["  (all zero)"]


# --- commands --------------------------------------------------------------------------

def _cmd_list(args, out):
    names = list_charts()
    width = max(len(n) for n in names)
    for n in names:
        out.write(f"{n:{width}}  {get_chart(n).description}\n")
    return EXIT_OK


def _cmd_validate(args, out):
    chart, expected = read_manifest_file(args.file)
    point = tuple((lo + hi) / 2 for lo, hi in chart.domain)
    out.write(f"{args.file}: ok ({chart.name}, n={chart.dim}, epsilon={chart.epsilon:+d}")
    try:
        rep = axiom_report(chart, point)
        out.write(f", axiom residual {rep.structural_max():.3e} at the domain centre)\n")
    except DegenerateMetricError:
        out.write(", metric degenerate at the domain centre)\n")
    return EXIT_OK


def _cmd_classify(args, out):
    chart, expected = resolve_target(args.target)
    report = cl.classify_chart(chart, count=args.points, seed=args.seed, tol=args.tol)
    if args.json:
        out.write(dumps_json(report_to_dict(report)))
    else:
        out.write(_render_report(report, expected))
    if args.assert_:
        bad = cl.expected_mismatches(report, expected)
        for prop, want, got in bad:
            sys.stderr.write(f"assertion failed: {prop} expected {want}, got {got}\n")
        for v in report.audit:
            sys.stderr.write(f"assertion failed: audit {v.rule}: {v.detail}\n")
        if bad or report.audit:
            return EXIT_ASSERT
    return EXIT_OK


def _cmd_identities(args, out):
    chart, _ = resolve_target(args.target)
    tiers = cl.TIERS if args.suite == "all" else (args.suite,)
    geos, _ = cl.sample_points(chart, args.points, args.seed)
    rows = cl.identity_suite(chart, geos, tiers=tiers, tol=args.tol)
    if args.json:
        out.write(dumps_json({
            "chart": chart.name,
            "epsilon": chart.epsilon,
            "suite": args.suite,
            "samples": {"count": args.points, "seed": args.seed, "tol": args.tol},
            "identities": [_identity_dict(r) for r in rows],
        }))
    else:
        out.write(f"chart {chart.name}  suite {args.suite}  points {args.points}  seed {args.seed}\n")
        out.write("\n".join(_render_identities(rows)) + "\n")
    if args.assert_ and any(r.applicable and not r.passed for r in rows):
        return EXIT_ASSERT
    return EXIT_OK


def _parse_point(text, n):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise _UsageError(f"--at expects comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise _UsageError(f"--at expects {n} coordinates, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise _UsageError("--at coordinates must be finite")
    return vals


def _cmd_curvature(args, out):
    chart, _ = resolve_target(args.target)
    point = _parse_point(args.at, chart.dim)
    geo = geometry(chart, point)
    cf = curvature_frame(geo)
    xi = geo.frame.xi
    s_xi = float(xi @ cf.S @ xi)
    n = chart.dim
    planes = {}
    for i in range(n):
        for j in range(i + 1, n):
            key = f"{i + 1},{j + 1}"
            try:
                planes[key] = sectional(geo, X=np.eye(n)[i], Y=np.eye(n)[j])
            except DegenerateMetricError:
                planes[key] = None
    if args.json:
        out.write(dumps_json({
            "chart": chart.name,
            "epsilon": chart.epsilon,
            "point": list(point),
            "christoffel": geo.gamma.tolist(),
            "riemann_up": cf.R_up.tolist(),
            "ricci": cf.S.tolist(),
            "scalar": float(cf.r),
            "ricci_xi_xi": s_xi,
            "sectional": planes,
        }))
        return EXIT_OK
    names = [str(k + 1) for k in range(n)]
    lines = [f"chart {chart.name}  epsilon {chart.epsilon:+d}  at ({', '.join(f'{v:g}' for v in point)})"]
    lines += ["Christoffel symbols G^k_ij:", *_nonzero(geo.gamma, "G", names)]
    lines += ["Riemann R^l_ijk:", *_nonzero(cf.R_up, "R", names)]
    lines += ["Ricci S:", _matrix(cf.S)]
    lines.append(f"scalar curvature r = {cf.r:.12g}")
    lines.append(f"S(xi,xi) = {s_xi:.12g}")
    lines.append("sectional curvatures of coordinate planes:")
    for key, val in planes.items():
        i, j = key.split(",")
        shown = "degenerate plane" if val is None else f"{val:.12g}"
        lines.append(f"  K(d{i},d{j}) = {shown}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


# --- entry points ----------------------------------------------------------------------

def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _positive_float(text):
    value = float(text)
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError("must be a positive number")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="paralab", description="Check indefinite almost paracontact metric charts."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list gallery charts")

    p = sub.add_parser("validate", help="check a manifest file")
    p.add_argument("file")

    def sampling(p):
        p.add_argument("--points", type=_positive_int, default=cl.DEFAULT_COUNT)
        p.add_argument("--seed", type=int, default=cl.DEFAULT_SEED)
        p.add_argument("--tol", type=_positive_float, default=cl.DEFAULT_TOL)
        p.add_argument("--json", action="store_true")
        p.add_argument("--assert", dest="assert_", action="store_true")

    p = sub.add_parser("classify", help="classify a gallery chart or manifest")
    p.add_argument("target")
    sampling(p)

    p = sub.add_parser("identities", help="run identity suites")
    p.add_argument("target")
    p.add_argument("--suite", choices=SUITES, default="all")
    sampling(p)

    p = sub.add_parser("curvature", help="curvature at one point")
    p.add_argument("target")
    p.add_argument("--at", required=True, help="comma-separated coordinates")
    p.add_argument("--json", action="store_true")
    return parser


_COMMANDS = {
    "list": _cmd_list,
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "identities": _cmd_identities,
    "curvature": _cmd_curvature,
}


def run_cli(argv, stdout=None, stderr=None):
    """Run one command; returns ``(exit_code, stdout_text)``."""
    out = io.StringIO()
    err = stderr if stderr is not None else sys.stderr
    saved = sys.stderr
    sys.stderr = err
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0), out.getvalue()
        try:
            code = _COMMANDS[args.command](args, out)
        except (_UsageError, ManifestError) as exc:
            err.write(f"error: {exc}\n")
            code = EXIT_USAGE
        except (SamplingError, DegenerateMetricError) as exc:
            err.write(f"degenerate: {exc}\n")
            code = EXIT_DEGENERATE
        except ParalabError as exc:
            err.write(f"error: {exc}\n")
            code = EXIT_USAGE
    finally:
        sys.stderr = saved
    text = out.getvalue()
    if stdout is not None:
        stdout.write(text)
    return code, text


def main(argv=None):
    code, _ = run_cli(sys.argv[1:] if argv is None else argv, stdout=sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
