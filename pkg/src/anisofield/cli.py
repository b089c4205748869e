"""Command-line interface: simulate, project, estimate, theory, evaluate.

Fields travel as AFB1 binary files (or CSV for debugging), 1-d paths as
two-column CSV with metadata comments, and every analysis output is CSV.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .errors import AnisofieldError
from .estimator import VariationSpec, estimate_H, estimate_direction, quad_variation
from .filters import parse_filter
from .harness import emit_table, load_config, run_eval_1d, run_eval_2d
from .projection import project_axis, project_window, projection_to_csv
from .spectral import SpectralModel, parse_index, parse_window
from .synthesis import (
    SampledPath,
    afb_sra,
    fbm_path,
    field_to_csv,
    read_field,
    read_path_csv,
    write_field,
    write_path_csv,
)
from . import theory


def _cmd_simulate(args) -> int:
    if (args.index is None) == (args.hurst is None):
        raise SystemExit("simulate: give exactly one of --index or --hurst")
    if args.index is not None:
        model = SpectralModel(parse_index(args.index))
        field = afb_sra(model, args.grid, args.seed)
        if args.format == "csv":
            field_to_csv(field, args.out)
        else:
            write_field(field, args.out)
    else:
        path = fbm_path(args.hurst, args.length, args.seed)
        write_path_csv(path, args.out, seed=args.seed)
    return 0


def _cmd_project(args) -> int:
    field = read_field(args.field)
    if args.window is None and args.m_sub is None:
        result = project_axis(field, args.direction)
    else:
        window = parse_window(args.window or "indicator")
        result = project_window(field, args.direction, window, args.m_sub)
    projection_to_csv(result, args.out)
    return 0


def _is_field_file(path: str) -> bool:
    with open(path, "rb") as fh:
        return fh.read(4) == b"AFB1"


def _write_estimates(rows, out) -> None:
    header = ["seed", "h_true", "direction", "nu", "estimate", "V1", "V2", "out_of_range"]
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    finally:
        if out:
            fh.close()


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def _cmd_estimate(args) -> int:
    filt = parse_filter(args.filter)
    rows = []
    if _is_field_file(args.input):
        field = read_field(args.input)
        truths = field.params_true or (None, None)
        for direction, h_true in zip(("horizontal", "vertical"), truths):
            for nu in args.nu:
                est = estimate_direction(field, direction, nu, filt)
                t1 = est.variations[VariationSpec(filt, 1, field.grid_size >> nu)]
                t2 = est.variations[VariationSpec(filt, 2, field.grid_size >> nu)]
                rows.append([
                    field.seed if field.seed is not None else "",
                    _fmt(h_true),
                    direction,
                    nu,
                    repr(est.value),
                    repr(t1),
                    repr(t2),
                    int(est.out_of_range),
                ])
    else:
        path, seed = read_path_csv(args.input)
        for nu in args.nu:
            sub = SampledPath(
                values=path.values[:: 1 << nu], hurst_true=path.hurst_true
            )
            est = estimate_H(sub, filt, args.u, args.v)
            n = sub.n_steps
            v1 = quad_variation(sub, VariationSpec(filt, args.u, n))
            v2 = quad_variation(sub, VariationSpec(filt, args.v, n))
            rows.append([
                seed if seed is not None else "",
                _fmt(path.hurst_true),
                "path",
                nu,
                repr(est),
                repr(v1),
                repr(v2),
                int(not 0.0 < est < 1.0),
            ])
    _write_estimates(rows, args.out)
    return 0


def _cmd_theory(args) -> int:
    filt = parse_filter(args.filter)
    bundle = theory.asymptotic_constants(filt, args.u, args.v, args.hurst)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["E_u", "E_v", "C_uu", "C_uv", "C_vv", "gamma"])
        writer.writerow(
            repr(x)
            for x in (
                bundle.E_u, bundle.E_v, bundle.C_uu,
                bundle.C_uv, bundle.C_vv, bundle.gamma,
            )
        )
    finally:
        if args.out:
            fh.close()
    return 0


def _cmd_evaluate(args) -> int:
    overrides = {
        "seed": args.seed,
        "reps": args.reps,
        "out": args.out,
        "workers": args.workers,
    }
    config = load_config(args.config, overrides)
    if config.mode == "2d":
        report = run_eval_2d(config)
        expected = len(config.indices) * len(config.nu_levels)
    else:
        report = run_eval_1d(config)
        expected = len(config.hursts) * len(config.path_lengths)
    out = config.out or "eval_report.csv"
    emit_table(report, out)
    if len(report.rows) != expected:
        print(
            f"evaluate: produced {len(report.rows)} rows, expected {expected}",
            file=sys.stderr,
        )
        return 1
    print(
        f"evaluate: {len(report.rows)} rows -> {out} "
        f"({report.failures} failed replicates, {report.runtime:.1f}s)"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anisofield",
        description=(
            "Simulate fractional Brownian paths/fields, project, estimate "
            "directional regularity, and run Monte Carlo evaluations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="synthesize a field or a path")
    p.add_argument("--index", help="2-d model, e.g. constant:0.5 or axes:0.7,0.2")
    p.add_argument("--hurst", "--H", type=float, dest="hurst", help="1-d Hurst index")
    p.add_argument("--grid", "-M", type=int, default=512, help="field grid size")
    p.add_argument("--length", "-N", type=int, default=4096, help="path step count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "csv"), default="binary")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("project", help="axis projection of a field file")
    p.add_argument("--field", required=True)
    p.add_argument("--direction", choices=("horizontal", "vertical"), required=True)
    p.add_argument("--window", help="indicator or gaussian:SIGMA[,CENTER]")
    p.add_argument("--m-sub", type=int, dest="m_sub", help="hyperplane sum resolution")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("estimate", help="regularity estimates from a file")
    p.add_argument("--input", required=True, help="AFB1 field file or path CSV")
    p.add_argument("--nu", type=int, nargs="+", default=[0], help="subsampling levels")
    p.add_argument("--filter", default="1,-2,1")
    p.add_argument("--u", type=int, default=2)
    p.add_argument("--v", type=int, default=1)
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("theory", help="asymptotic constants of the estimator")
    p.add_argument("--filter", default="1,-2,1")
    p.add_argument("--u", type=int, default=2)
    p.add_argument("--v", type=int, default=1)
    p.add_argument("--hurst", "--H", type=float, dest="hurst", required=True)
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=_cmd_theory)

    p = sub.add_parser("evaluate", help="Monte Carlo evaluation from a config")
    p.add_argument("--config", required=True, help="flat key=value config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AnisofieldError as exc:
        print(f"anisofield: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
