"""Command-line interface.

Exit codes: 0 success, 2 domain/validation error (bad layout, probe too
close, not enclosed, failed validation), 1 unexpected failure. Domain
errors emit one machine-readable JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import FloorgainError, NotEnclosed, ProbeTooClose
from .jobs import (
    DEFAULT_PRESET,
    build_heatmap_response,
    build_point_response,
    build_radii_response,
    build_sweep_response,
    params_overrides_from_db,
    radii_text,
    resolve_params,
    sweep_text,
)
from .layoutio import canonical_json, heatmap_from_csv, heatmap_to_csv, load_layout
from .fom import evaluate_grid


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", default=DEFAULT_PRESET, help="named parameter preset")
    parser.add_argument("--f-c-hz", type=float, dest="f_c_hz")
    parser.add_argument("--p-t-dbw-m2", type=float, dest="p_t_dbw_m2")
    parser.add_argument("--p-th-dbw-m2", type=float, dest="p_th_dbw_m2")
    parser.add_argument("--sigma2-dbw", type=float, dest="sigma2_dbw")
    parser.add_argument("--h-t-m", type=float, dest="h_t_m")
    parser.add_argument("--h-r-m", type=float, dest="h_r_m")
    parser.add_argument("--n-l", type=float, dest="n_l")
    parser.add_argument("--n-n", type=float, dest="n_n")


def _params(args: argparse.Namespace):
    overrides = params_overrides_from_db(
        f_c_hz=args.f_c_hz,
        p_t_dbw_m2=args.p_t_dbw_m2,
        p_th_dbw_m2=args.p_th_dbw_m2,
        sigma2_dbw=args.sigma2_dbw,
        h_t_m=args.h_t_m,
        h_r_m=args.h_r_m,
        n_l=args.n_l,
        n_n=args.n_n,
    )
    return resolve_params(args.preset, overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floorgain",
        description="Wireless figures of merit (interference/power gain) for floor plans",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_radii = sub.add_parser("radii", help="print the three coverage radii")
    _add_param_flags(p_radii)
    p_radii.add_argument("--json", action="store_true")

    p_eval = sub.add_parser("evaluate", help="evaluate one probe point")
    _add_param_flags(p_eval)
    p_eval.add_argument("--layout", required=True, help="layout file or fixture name")
    p_eval.add_argument("--x", type=float, required=True)
    p_eval.add_argument("--y", type=float, required=True)
    p_eval.add_argument("--margin", type=float, default=0.05)

    p_heat = sub.add_parser("heatmap", help="rasterize FoMs over the layout")
    _add_param_flags(p_heat)
    p_heat.add_argument("--layout", required=True)
    p_heat.add_argument("--res", type=float, default=0.25)
    p_heat.add_argument("--margin", type=float, default=0.05)
    p_heat.add_argument("--workers", type=int, default=1)
    p_heat.add_argument("--out", help="output file (default stdout)")
    p_heat.add_argument("--format", choices=("csv", "json"), default="csv")

    p_sweep = sub.add_parser("sweep", help="room size / aspect-ratio sweep")
    _add_param_flags(p_sweep)
    p_sweep.add_argument("--areas", required=True, help="comma-separated areas [m^2]")
    p_sweep.add_argument("--ars", required=True, help="comma-separated aspect ratios >= 1")
    p_sweep.add_argument("--res", type=float, default=0.5)
    p_sweep.add_argument("--json", action="store_true")

    p_val = sub.add_parser("validate", help="closed form vs quadrature and Monte Carlo")
    _add_param_flags(p_val)
    p_val.add_argument("--layout", default="rect_5x10")
    p_val.add_argument("--samples", type=int, default=10_000_000)
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--no-mc", action="store_true", help="skip the Monte Carlo stage")
    p_val.add_argument("--json", action="store_true")

    p_serve = sub.add_parser("serve", help="run the HTTP evaluation service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--workers", type=int, default=1, help="grid workers per request")

    return parser


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise FloorgainError(f"{flag} expects comma-separated numbers, got {text!r}") from exc


def run(argv: list[str]) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "radii":
        p = _params(args)
        if args.json:
            print(canonical_json(build_radii_response(p)))
        else:
            print(radii_text(p))
        return 0

    if args.command == "evaluate":
        p = _params(args)
        layout = load_layout(args.layout)
        payload = build_point_response(layout, args.x, args.y, p, margin=args.margin)
        print(canonical_json(payload))
        return 0

    if args.command == "heatmap":
        p = _params(args)
        layout = load_layout(args.layout)
        if args.format == "csv":
            grid = evaluate_grid(layout, p, resolution=args.res, margin=args.margin, workers=args.workers)
            text = heatmap_to_csv(grid)
        else:
            payload = build_heatmap_response(
                layout, p, resolution=args.res, margin=args.margin, workers=args.workers
            )
            text = canonical_json(payload) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0

    if args.command == "sweep":
        p = _params(args)
        payload = build_sweep_response(
            p,
            _parse_float_list(args.areas, "--areas"),
            _parse_float_list(args.ars, "--ars"),
            resolution=args.res,
        )
        print(canonical_json(payload) if args.json else sweep_text(payload))
        return 0

    if args.command == "validate":
        p = _params(args)
        layout = load_layout(args.layout)
        from .oracle import McSpec, validate as run_validate

        report = run_validate(
            layout, p, mcspec=None if args.no_mc else McSpec(samples=args.samples, seed=args.seed)
        )
        if args.json:
            from .jobs import params_payload

            print(canonical_json({"mode": "validate", "params": params_payload(p), "result": report.to_dict()}))
        else:
            print(report.to_text())
        return 0 if report.passed else 2

    if args.command == "serve":
        from .server import serve

        serve(host=args.host, port=args.port, workers=args.workers)
        return 0

    raise AssertionError("unreachable")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(argv)
    except (NotEnclosed, ProbeTooClose) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, NotEnclosed):
            diag["gaps_rad"] = [[a, b] for a, b in exc.gaps]
        if isinstance(exc, ProbeTooClose):
            diag["wall_id"] = exc.wall_id
            diag["distance_m"] = exc.distance
        print(json.dumps(diag), file=sys.stderr)
        return 2
    except (FloorgainError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
