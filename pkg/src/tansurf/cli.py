"""Command-line interface: analyze curves, build parallels and meshes,
classify singularities, and run the verification suites.

Exit codes: 0 success, 1 check failure or degenerate geometry, 2 usage or
parse errors.  All outputs are deterministic: floats are serialized with
shortest round-trip repr and no timestamps or randomness enter any file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .classify import classify_type
from .curve import (
    CurveSpecError,
    NotFrontalError,
    TypeUndeterminedError,
    curve_from_spec,
    detect_type,
    find_inflections,
)
from .expressions import ExpressionError
from .frame import InflectionError, transport_bishop, unit_normal_field
from .jets import DEFAULT_ORDER
from .surface import (
    ParallelSpec,
    directrix,
    directrix_point_formula,
    directrix_velocity_sup,
    export_obj,
    locus_to_csv,
    parallel_equals_tangent_of_directrix,
    parallel_surface,
    parallel_surface_pointwise,
    singular_locus,
    tangent_surface,
)
from .verify import run_suite

CONICAL_TOL = 1e-7


class UsageError(Exception):
    """Bad invocation or unparseable input; exits with code 2."""


def _load_spec(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read spec file {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _write_json(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _parse_r(values):
    out = []
    for chunk in values or []:
        try:
            out.append(tuple(float(x) for x in str(chunk).split(",")))
        except ValueError as exc:
            raise UsageError(f"bad --r value {chunk!r}: {exc}") from exc
    return out


def _grid(lo, hi, n):
    if n == 1:
        return [0.5 * (lo + hi)]
    return [lo + i * (hi - lo) / (n - 1) for i in range(n)]


def _curve_info(curve):
    return {
        "name": curve.name,
        "dim": curve.dim,
        "domain": [curve.domain[0], curve.domain[1]],
        "polynomial": bool(curve.is_polynomial),
    }


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def cmd_analyze(args):
    spec = _load_spec(args.spec)
    curve = curve_from_spec(spec)
    lo, hi = curve.domain
    if args.t_range:
        lo, hi = args.t_range
    ts = _grid(lo, hi, args.samples)
    inflections = find_inflections(curve)

    trace = None
    frame_info = None
    try:
        trace = transport_bishop(curve)
        frame_info = {"drift": trace.drift, "range": list(trace.t_range)}
        if args.trace:
            trace.to_csv(args.trace)
            frame_info["trace_csv"] = args.trace
    except (InflectionError, ValueError) as exc:
        frame_info = {"error": str(exc)}

    samples = []
    for t in ts:
        entry = {"t": t}
        try:
            ct = detect_type(curve, t, "auto", args.rank_eps, args.jet_order)
            entry["type"] = list(ct.entries)
            entry["mode"] = ct.mode
            entry["classification"] = classify_type(ct.entries).to_dict()
        except (TypeUndeterminedError, NotFrontalError) as exc:
            entry["type"] = None
            entry["error"] = str(exc)
        tau = curve.tau_jet(t, 1)
        taup = [j.derivative_value(1) for j in tau]
        entry["kappa"] = sum(x * x for x in taup) ** 0.5
        if trace is not None:
            entry["ell"] = list(trace.state_at(t).ell)
        samples.append(entry)

    payload = {
        "command": "analyze",
        "curve": _curve_info(curve),
        "inflections": inflections,
        "frame": frame_info,
        "samples": samples,
    }
    _write_json(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# parallel
# ---------------------------------------------------------------------------


def _parallel_entry(spec_dict, r, index, out_dir, samples, s_range, eq_grid):
    """Build one parallel: mesh, singular locus, directrix, equality check.

    Runs in a worker process; everything is rebuilt from the JSON spec.
    """
    curve = curve_from_spec(spec_dict)
    entry = {"index": index, "r": list(r), "files": {}}
    out = Path(out_dir)
    mesh_path = out / f"mesh_{index:03d}.obj"

    trace = None
    try:
        trace = transport_bishop(curve)
    except (InflectionError, ValueError) as exc:
        entry["frame_error"] = str(exc)

    if trace is not None and len(r) != trace.normal_count:
        entry["error"] = (
            f"offset needs {trace.normal_count} components for dim={curve.dim}, got {len(r)}"
        )
        return entry

    if trace is not None:
        pspec = ParallelSpec(r, trace)
        par = parallel_surface(curve, pspec, s_range=s_range)
        if curve.dim == 3:
            export_obj(par, mesh_path, nt=samples, ns=samples)
            entry["files"]["mesh"] = mesh_path.name
        locus = singular_locus(par, nt=min(samples, 201))
        locus_path = out / f"locus_{index:03d}.csv"
        locus_to_csv(locus, locus_path)
        entry["files"]["locus"] = locus_path.name
        entry["sigma_min_max"] = max(locus.sigma_min)

        g = directrix(curve, pspec)
        vel_sup = directrix_velocity_sup(curve, pspec)
        entry["conical_degeneration"] = bool(vel_sup < CONICAL_TOL)
        eq = parallel_equals_tangent_of_directrix(
            curve, pspec, nt=eq_grid, ns=eq_grid, s_range=s_range
        )
        entry["equality"] = {
            "sup_diff": eq.sup_diff,
            "velocity_residual": eq.velocity_residual,
            "passes": eq.passes,
        }
        dir_ts = _grid(trace.t_range[0], trace.t_range[1], 33)
        dir_path = out / f"directrix_{index:03d}.json"
        dir_payload = {
            "r": list(r),
            "velocity_sup": vel_sup,
            "conical_degeneration": entry["conical_degeneration"],
            "base_point": list(g.position(trace.t_range[0])),
            "samples": [
                {"t": t, "point": list(directrix_point_formula(curve, pspec, t))}
                for t in dir_ts
            ],
        }
        dir_path.write_text(
            json.dumps(dir_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        entry["files"]["directrix"] = dir_path.name
    elif curve.dim == 3 and len(r) == 1:
        # inflectional curve in 3-space: mesh through the pointwise normal
        try:
            field = unit_normal_field(curve)
            par = parallel_surface_pointwise(curve, r[0], field, s_range=s_range)
            export_obj(par, mesh_path, nt=samples, ns=samples)
            entry["files"]["mesh"] = mesh_path.name
            entry["normal_field"] = "pointwise"
        except (ValueError, InflectionError) as exc:
            entry["error"] = str(exc)
    else:
        entry["error"] = entry.get("frame_error", "no frame available")
    return entry


def _parallel_worker(payload):
    return _parallel_entry(*payload)


def cmd_parallel(args):
    spec = _load_spec(args.spec)
    curve = curve_from_spec(spec)  # early validation
    rs = _parse_r(args.r)
    if not rs:
        raise UsageError("parallel needs at least one --r value")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    s_range = tuple(args.s_range)

    jobs = args.jobs or os.cpu_count() or 1
    payloads = [
        (spec, r, i, str(out_dir), args.samples, s_range, args.eq_grid)
        for i, r in enumerate(rs)
    ]
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_parallel_worker, payloads))
    else:
        entries = [_parallel_worker(p) for p in payloads]

    summary = {
        "command": "parallel",
        "curve": _curve_info(curve),
        "s_range": list(s_range),
        "samples": args.samples,
        "entries": entries,
    }
    _write_json(summary, out_dir / "summary.json")
    hard_failures = [e for e in entries if "error" in e]
    return 1 if len(hard_failures) == len(entries) else 0


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def cmd_classify(args):
    spec = _load_spec(args.spec)
    curve = curve_from_spec(spec)
    rs = _parse_r(args.r)
    r = rs[0] if rs else (0.0,) * max(curve.dim - 2, 1)
    t = args.t

    payload = {"command": "classify", "curve": _curve_info(curve), "t": t, "r": list(r)}
    try:
        if any(x != 0.0 for x in r):
            trace = transport_bishop(curve)
            pspec = ParallelSpec(r, trace)
            g = directrix(curve, pspec)
            ct = detect_type(g, t, "numeric", args.rank_eps, args.jet_order)
        else:
            ct = detect_type(curve, t, "auto", args.rank_eps, args.jet_order)
    except (InflectionError, TypeUndeterminedError, NotFrontalError) as exc:
        payload["error"] = str(exc)
        _write_json(payload, args.out)
        return 1
    payload["detected_type"] = list(ct.entries)
    payload["mode"] = ct.mode
    payload["label"] = classify_type(ct.entries).to_dict()
    _write_json(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# mesh
# ---------------------------------------------------------------------------


def cmd_mesh(args):
    spec = _load_spec(args.spec)
    curve = curve_from_spec(spec)
    rs = _parse_r(args.r)
    s_range = tuple(args.s_range)
    if rs:
        trace = transport_bishop(curve)
        surface = parallel_surface(curve, ParallelSpec(rs[0], trace), s_range=s_range)
    else:
        surface = tangent_surface(curve, s_range=s_range)
    export_obj(surface, args.out, nt=args.samples, ns=args.samples)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args):
    report = run_suite(args.suite)
    if args.out:
        _write_json(report.to_dict(), args.out)
    else:
        sys.stdout.write(report.to_markdown())
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p, spec_required=True):
    p.add_argument("--spec", required=spec_required, help="curve-spec JSON file")
    p.add_argument("--jet-order", type=int, default=DEFAULT_ORDER, help="jet order budget")
    p.add_argument("--rank-eps", type=float, default=1e-8, help="relative SVD rank threshold")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tansurf",
        description="tangent developable surfaces of frontal curves: "
        "parallels, directrix curves, and singularity classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="curve types, inflections, frame invariants")
    _add_common(p)
    p.add_argument("--t-range", type=float, nargs=2, metavar=("A", "B"))
    p.add_argument("--samples", type=int, default=33)
    p.add_argument("--trace", default=None, help="also export the frame trace CSV here")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("parallel", help="parallel surfaces, loci, directrix curves")
    _add_common(p)
    p.add_argument("--r", action="append", metavar="V[,V...]", help="offset (repeatable)")
    p.add_argument("--samples", type=int, default=201, help="mesh grid per side")
    p.add_argument("--s-range", type=float, nargs=2, default=(-1.0, 1.0))
    p.add_argument("--eq-grid", type=int, default=41, help="equality-check grid per side")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for the sweep")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_parallel)

    p = sub.add_parser("classify", help="singularity label at (t, r)")
    _add_common(p)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--r", action="append", metavar="V[,V...]")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("mesh", help="export an OBJ mesh")
    _add_common(p)
    p.add_argument("--r", action="append", metavar="V[,V...]")
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--s-range", type=float, nargs=2, default=(-1.0, 1.0))
    p.add_argument("--out", required=True, help="output OBJ file")
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", choices=["algebra", "frames", "all"], default="all")
    p.add_argument("--out", default=None, help="write a JSON report here")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CurveSpecError, ExpressionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InflectionError, NotFrontalError, TypeUndeterminedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
