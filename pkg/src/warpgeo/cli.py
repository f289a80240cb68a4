"""Command line interface.

Subcommands: analyze, classify, scan, warp, verify.  Exit codes:
0 pass, 1 check failure, 2 usage/config error, 3 numerical/domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import biharmonic, verify as verify_mod, warped
from .errors import EvalDomainError, UsageError, WarpgeoError
from .immersion import PointGeometry
from .scene import load_scene


def _parse_points(text, m):
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coords = [float(x) for x in chunk.split(",")]
        if len(coords) != m:
            raise UsageError(f"point {chunk!r} needs {m} coordinates")
        points.append(tuple(coords))
    if not points:
        raise UsageError("no points given")
    return points


def _parse_grid(text, m):
    axes = []
    for part in text.split(","):
        lo, hi, num = part.split(":")
        axes.append(np.linspace(float(lo), float(hi), int(num)))
    if len(axes) != m:
        raise UsageError(f"grid needs {m} axes")
    mesh = np.meshgrid(*axes, indexing="ij")
    return [tuple(float(c[i]) for c in mesh) for i in np.ndindex(mesh[0].shape)]


def _parse_range(text):
    lo, hi = text.split(":")
    return float(lo), float(hi)


def _parse_tgrid(text):
    lo, hi, num = text.split(":")
    return np.linspace(float(lo), float(hi), int(num))


def _resolve_points(args, scene):
    m = scene.immersion.m
    if getattr(args, "points", None):
        return _parse_points(args.points, m)
    if getattr(args, "grid", None):
        return _parse_grid(args.grid, m)
    if scene.points:
        return list(scene.points)
    raise UsageError("no points: pass --points/--grid or an analysis block")


def _emit_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _print_table(headers, rows):
    widths = [
        max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
        for i, h in enumerate(headers)
    ]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def _fmt(x):
    return f"{x:.9g}"


def cmd_analyze(args):
    scene = load_scene(args.scene)
    points = _resolve_points(args, scene)
    rows = []
    reports = []
    failed = 0
    for p in points:
        try:
            pg = PointGeometry(scene.immersion, p)
            pg.require_hypersurface()
            rep = pg.report()
            n_res = biharmonic.normal_residual(scene.immersion, p, geometry=pg)
            _, t_res = biharmonic.tangential_residual(scene.immersion, p, geometry=pg)
            entry = rep.to_dict()
            entry["normalResidual"] = n_res
            entry["tangentialResidual"] = t_res
            reports.append(entry)
            rows.append(
                [
                    ",".join(_fmt(c) for c in p),
                    _fmt(rep.lam),
                    _fmt(rep.normA2),
                    _fmt(rep.lap_lambda),
                    _fmt(n_res),
                    _fmt(t_res),
                ]
            )
        except WarpgeoError as exc:
            failed += 1
            reports.append({"point": list(p), "error": str(exc)})
            rows.append([",".join(_fmt(c) for c in p), "error", str(exc), "", "", ""])
    _print_table(
        ["point", "lambda", "|A|^2", "lapLambda", "normalRes", "tangentialRes"], rows
    )
    if args.json:
        _emit_json(args.json, {"reports": reports})
    if failed:
        raise EvalDomainError(f"{failed} point(s) failed")
    return 0


def cmd_classify(args):
    scene = load_scene(args.scene)
    points = _resolve_points(args, scene)
    tol = args.tol if args.tol is not None else scene.tolerance
    record = biharmonic.classify(scene.immersion, points, tol)
    payload = record.to_dict()
    for key in (
        "harmonic",
        "biharmonic",
        "normally_biharmonic",
        "tangentially_biharmonic",
    ):
        print(f"{key:25s} {payload[key]}")
    print(f"{'maxNormalResidual':25s} {_fmt(record.max_normal)}")
    print(f"{'maxTangentialResidual':25s} {_fmt(record.max_tangential)}")
    print(f"{'maxMeanCurvature':25s} {_fmt(record.max_mean_curvature)}")
    if args.json:
        _emit_json(args.json, payload)
    return 0


def cmd_scan(args):
    scene = load_scene(args.scene)
    lo, hi = _parse_range(args.range)
    if args.probe:
        probe = _parse_points(args.probe, scene.immersion.m)[0]
    elif scene.points:
        probe = scene.points[0]
    else:
        raise UsageError("scan needs --probe or an analysis point")
    result = biharmonic.parameter_scan(
        scene.immersion, args.param, lo, hi, args.samples, probe
    )
    rows = [
        [_fmt(v), _fmt(r) if r is not None else "failed"] for v, r in result.samples
    ]
    _print_table([args.param, "normalResidual"], rows)
    print("roots:", " ".join(_fmt(r) for r in result.roots) or "(none)")
    for v, msg in result.failures:
        print(f"failed sample {args.param}={_fmt(v)}: {msg}", file=sys.stderr)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([args.param, "normal_residual"])
            for v, r in result.samples:
                writer.writerow([v, "" if r is None else r])
    if args.json:
        _emit_json(args.json, result.to_dict())
    return 0


def cmd_warp(args):
    scene = load_scene(args.scene)
    ws = scene.require_warp()
    point = _parse_points(args.point, scene.immersion.m)[0]
    tgrid = _parse_tgrid(args.t)
    reports = [warped.warped_report(ws, float(t), point) for t in tgrid]
    rows = [
        [
            _fmt(r.t),
            _fmt(r.f),
            _fmt(r.pairing),
            _fmt(r.pairing_closed_form),
            _fmt(r.power_residual),
            _fmt(r.tangential_part_norm),
            _fmt(r.normal_part_norm),
        ]
        for r in reports
    ]
    _print_table(
        ["t", "f", "pairing", "pairingClosed", "powerResidual", "|tangential|", "|normal|"],
        rows,
    )
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                [
                    "t",
                    "f",
                    "pairing",
                    "pairing_closed_form",
                    "power_residual",
                    "tangential_norm",
                    "normal_norm",
                ]
            )
            for r in reports:
                writer.writerow(
                    [
                        r.t,
                        r.f,
                        r.pairing,
                        r.pairing_closed_form,
                        r.power_residual,
                        r.tangential_part_norm,
                        r.normal_part_norm,
                    ]
                )
    if args.json:
        _emit_json(args.json, {"reports": [r.to_dict() for r in reports]})
    return 0


def cmd_verify(args):
    checks = verify_mod.run_checks(args.filter)
    rows = [
        [
            c.name,
            _fmt(c.expected),
            _fmt(c.got),
            _fmt(c.tol),
            "pass" if c.passed else "FAIL",
        ]
        for c in checks
    ]
    _print_table(["check", "expected", "got", "tol", "status"], rows)
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    if args.json:
        _emit_json(args.json, {"checks": [c.row() for c in checks]})
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="warpgeo",
        description=(
            "Verification engine for biharmonic hypersurfaces and "
            "warped-product inclusions"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="pointwise geometry and residual report")
    p.add_argument("scene")
    p.add_argument("--points", help="semicolon-separated points, e.g. '1,0.5;2,1.57'")
    p.add_argument("--grid", help="per-axis lo:hi:N specs, comma separated")
    p.add_argument("--json", help="write JSON report to this path")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("classify", help="biharmonicity flags over a point batch")
    p.add_argument("scene")
    p.add_argument("--points")
    p.add_argument("--grid")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("scan", help="roots of the normal residual in a parameter")
    p.add_argument("scene")
    p.add_argument("--param", required=True)
    p.add_argument("--range", required=True, help="lo:hi")
    p.add_argument("--samples", type=int, default=33)
    p.add_argument("--probe", help="probe point, e.g. '1,0.7'")
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("warp", help="warped inclusion report over a t grid")
    p.add_argument("scene")
    p.add_argument("--t", required=True, help="lo:hi:N")
    p.add_argument("--point", required=True)
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_warp)

    p = sub.add_parser("verify", help="run the built-in verification suite")
    p.add_argument("--filter", help="only run checks whose name contains this")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.fn(args)
    except WarpgeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = exc.exit_code
    sys.exit(code)


if __name__ == "__main__":
    main()
