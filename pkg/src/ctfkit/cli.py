"""Command-line interface.

Subcommands: ``compute`` (coefficients and optional factor sequences),
``validate`` (frequency-domain quality gate), ``bode`` (per-function
magnitude/phase CSV), ``oracle`` (finite-difference cross-check) and
``catalog`` (built-in walls).  Exit codes: 0 success/pass, 1 a validation
or oracle gate failed, 2 bad input, 3 numerical failure inside the
pipeline.  All numeric output uses scientific notation with 9 significant
digits, and identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import __version__
from .catalog import catalog_ids, get_entry
from .errors import InvalidConstructionError, NumericalError
from .fdoracle import FdConfig, compare_pulse_response
from .pipeline import (
    DEFAULT_DT,
    DEFAULT_ORDER,
    DEFAULT_SERIES_ORDER,
    compute_ctf,
    compute_response_factors,
)
from .validation import (
    DEFAULT_EPS_L2,
    DEFAULT_EPS_U,
    DEFAULT_N_POINTS,
    DEFAULT_OMEGA_MAX,
    DEFAULT_OMEGA_MIN,
    FrequencyGrid,
    quality_control,
)
from .wall import Construction, load_construction, serialize_construction, u_value

DEFAULT_RF_COUNT = 144


def _fmt(value: float) -> str:
    return f"{value:.8E}"


def _json_round(value: float) -> float:
    # Full float repr varies in digit count; routing through the fixed
    # 9-significant-digit form keeps JSON output stable and comparable.
    return float(_fmt(value))


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_wall_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "wall", nargs="?", metavar="WALL.json", help="path to a wall definition file"
    )
    parser.add_argument(
        "--catalog", metavar="ID", help="use a built-in wall instead of a file"
    )


def _resolve_wall(args: argparse.Namespace) -> Construction:
    if (args.wall is None) == (args.catalog is None):
        raise InvalidConstructionError(
            "supply exactly one wall source: a file path or --catalog ID"
        )
    if args.catalog is not None:
        return get_entry(args.catalog).construction
    return load_construction(args.wall)


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dt", type=float, default=DEFAULT_DT, help="time step, s")
    parser.add_argument(
        "--order", type=int, default=DEFAULT_ORDER, help="rational approximation order m"
    )
    parser.add_argument(
        "--series-order",
        type=int,
        default=DEFAULT_SERIES_ORDER,
        help="series truncation order N (needs N >= 2m)",
    )


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--freq-min", type=float, default=DEFAULT_OMEGA_MIN, help="lowest angular frequency, rad/s"
    )
    parser.add_argument(
        "--freq-max", type=float, default=DEFAULT_OMEGA_MAX, help="highest angular frequency, rad/s"
    )
    parser.add_argument(
        "--nfreq", type=int, default=DEFAULT_N_POINTS, help="number of grid points"
    )


def _grid_from(args: argparse.Namespace) -> FrequencyGrid:
    try:
        return FrequencyGrid(args.freq_min, args.freq_max, args.nfreq)
    except ValueError as exc:
        raise InvalidConstructionError(f"bad frequency grid: {exc}") from exc


# -- compute ------------------------------------------------------------------


def _compute_csv(c, ctf, rf) -> str:
    lines = [
        f"# wall: {c.name}",
        f"# dt_s: {_fmt(ctf.dt)}",
        f"# order: {ctf.order}",
        f"# u_value: {_fmt(u_value(c))}",
        "k,a,b,c,d",
    ]
    for k in range(ctf.order + 1):
        lines.append(
            f"{k},{_fmt(ctf.a[k])},{_fmt(ctf.b[k])},{_fmt(ctf.c[k])},{_fmt(ctf.d[k])}"
        )
    sums = ctf.sums()
    lines.append("sum," + ",".join(_fmt(sums[key]) for key in ("a", "b", "c", "d")))
    ratios = ctf.u_ratios()
    lines.append("u_ratio," + ",".join(_fmt(ratios[key]) for key in ("x", "y", "z")))
    if rf is not None:
        lines.append("")
        lines.append("k,X,Y,Z")
        for k in range(rf.count):
            lines.append(f"{k},{_fmt(rf.x[k])},{_fmt(rf.y[k])},{_fmt(rf.z[k])}")
    return "\n".join(lines) + "\n"


def _compute_json(c, ctf, rf) -> str:
    doc = {
        "wall": c.name,
        "dt_s": _json_round(ctf.dt),
        "order": ctf.order,
        "u_value": _json_round(u_value(c)),
        "coefficients": {
            "a": [_json_round(v) for v in ctf.a],
            "b": [_json_round(v) for v in ctf.b],
            "c": [_json_round(v) for v in ctf.c],
            "d": [_json_round(v) for v in ctf.d],
        },
        "row_sums": {
            key: _json_round(val) for key, val in ctf.sums().items()
        },
        "u_ratios": {
            key: _json_round(val) for key, val in ctf.u_ratios().items()
        },
    }
    if rf is not None:
        doc["response_factors"] = {
            "x": [_json_round(v) for v in rf.x],
            "y": [_json_round(v) for v in rf.y],
            "z": [_json_round(v) for v in rf.z],
        }
    return json.dumps(doc, indent=2) + "\n"


def _cmd_compute(args: argparse.Namespace) -> int:
    c = _resolve_wall(args)
    ctf = compute_ctf(c, dt=args.dt, order=args.order, series_order=args.series_order)
    rf = None
    if args.rf_count is not None:
        rf = compute_response_factors(
            c,
            dt=args.dt,
            count=args.rf_count,
            order=args.order,
            series_order=args.series_order,
        )
    render = _compute_json if args.format == "json" else _compute_csv
    _write_output(render(c, ctf, rf), args.out)
    return 0


# -- validate -----------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    c = _resolve_wall(args)
    ctf = compute_ctf(c, dt=args.dt, order=args.order, series_order=args.series_order)
    rf = None
    if args.rf_count is not None:
        rf = compute_response_factors(
            c,
            dt=args.dt,
            count=args.rf_count,
            order=args.order,
            series_order=args.series_order,
        )
    report = quality_control(
        c, ctf, grid=_grid_from(args), eps_u=args.eps_u, eps_l2=args.eps_l2, rf=rf
    )
    doc = report.to_dict()
    doc["l2_errors"] = {k: _json_round(v) for k, v in doc["l2_errors"].items()}
    doc["u_deviations"] = {k: _json_round(v) for k, v in doc["u_deviations"].items()}
    if "rf_l2_errors" in doc:
        doc["rf_l2_errors"] = {k: _json_round(v) for k, v in doc["rf_l2_errors"].items()}
    doc["u_value"] = _json_round(doc["u_value"])
    _write_output(json.dumps(doc, indent=2) + "\n", args.out)
    return 0 if report.passed else 1


# -- bode ---------------------------------------------------------------------


def _cmd_bode(args: argparse.Namespace) -> int:
    c = _resolve_wall(args)
    ctf = compute_ctf(c, dt=args.dt, order=args.order, series_order=args.series_order)
    report = quality_control(c, ctf, grid=_grid_from(args))
    base = args.out if args.out is not None else f"bode_{c.name}"
    for key in ("x", "y", "z"):
        path = f"{base}_{key}.csv"
        report.bode[key].write_csv(path)
        print(path)
    return 0


# -- oracle -------------------------------------------------------------------


def _cmd_oracle(args: argparse.Namespace) -> int:
    c = _resolve_wall(args)
    try:
        cfg = FdConfig(
            nodes_per_layer=args.nodes_per_layer,
            fd_timestep=args.fd_timestep,
            horizon=args.horizon,
            rel_tolerance=args.oracle_tol,
        )
    except ValueError as exc:
        raise InvalidConstructionError(f"bad oracle configuration: {exc}") from exc
    comp = compare_pulse_response(
        c, args.dt, cfg, order=args.order, series_order=args.series_order
    )
    lines = ["k,Y_empirical,Y_analytic,rel_dev"]
    for k in range(comp.empirical.size):
        lines.append(
            f"{k},{_fmt(comp.empirical[k])},{_fmt(comp.analytic[k])},{_fmt(comp.rel_dev[k])}"
        )
    _write_output("\n".join(lines) + "\n", args.out)
    verdict = "PASS" if comp.passed else "FAIL"
    print(
        f"{verdict}: max relative deviation {_fmt(comp.max_rel_dev)} over "
        f"k in [{comp.k_min}, {comp.k_max}] (tolerance {_fmt(comp.rel_tolerance)})"
    )
    return 0 if comp.passed else 1


# -- catalog ------------------------------------------------------------------


def _cmd_catalog(args: argparse.Namespace) -> int:
    if args.action == "list":
        for entry_id in catalog_ids():
            print(entry_id)
        return 0
    if args.id is None:
        raise InvalidConstructionError("catalog show needs an id")
    entry = get_entry(args.id)
    doc = serialize_construction(entry.construction)
    doc["source"] = entry.source
    doc["u_value"] = _json_round(u_value(entry.construction))
    print(json.dumps(doc, indent=2))
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctfkit",
        description="Conduction transfer function coefficients and response factors "
        "for multilayer walls.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser(
        "compute", help="compute CTF coefficients (and optionally response factors)"
    )
    _add_wall_source(p_compute)
    _add_pipeline_flags(p_compute)
    p_compute.add_argument(
        "--rf-count",
        type=int,
        nargs="?",
        const=DEFAULT_RF_COUNT,
        default=None,
        metavar="K",
        help="also emit the first K response factors (default K when bare: "
        f"{DEFAULT_RF_COUNT})",
    )
    p_compute.add_argument("--format", choices=("csv", "json"), default="csv")
    p_compute.add_argument("--out", metavar="PATH", help="write to file instead of stdout")
    p_compute.set_defaults(func=_cmd_compute)

    p_validate = sub.add_parser(
        "validate", help="check coefficients against exact frequency characteristics"
    )
    _add_wall_source(p_validate)
    _add_pipeline_flags(p_validate)
    _add_grid_flags(p_validate)
    p_validate.add_argument(
        "--eps-u", type=float, default=DEFAULT_EPS_U, help="steady-state tolerance (relative)"
    )
    p_validate.add_argument(
        "--eps-l2", type=float, default=DEFAULT_EPS_L2, help="L2 error tolerance (fraction)"
    )
    p_validate.add_argument(
        "--rf-count",
        type=int,
        nargs="?",
        const=DEFAULT_RF_COUNT,
        default=None,
        metavar="K",
        help="also report L2 errors of K-term truncated factor sums",
    )
    p_validate.add_argument("--out", metavar="PATH", help="write report to file")
    p_validate.set_defaults(func=_cmd_validate)

    p_bode = sub.add_parser("bode", help="write magnitude/phase CSV per transfer function")
    _add_wall_source(p_bode)
    _add_pipeline_flags(p_bode)
    _add_grid_flags(p_bode)
    p_bode.add_argument(
        "--out", metavar="BASE", help="output base path (files BASE_x.csv, BASE_y.csv, BASE_z.csv)"
    )
    p_bode.set_defaults(func=_cmd_bode)

    p_oracle = sub.add_parser(
        "oracle", help="cross-check factors against a finite-difference simulation"
    )
    _add_wall_source(p_oracle)
    _add_pipeline_flags(p_oracle)
    p_oracle.add_argument("--nodes-per-layer", type=int, default=FdConfig.nodes_per_layer)
    p_oracle.add_argument("--fd-timestep", type=float, default=FdConfig.fd_timestep)
    p_oracle.add_argument("--horizon", type=float, default=FdConfig.horizon)
    p_oracle.add_argument(
        "--oracle-tol",
        type=float,
        default=FdConfig.rel_tolerance,
        help="relative tolerance on the compared factor window",
    )
    p_oracle.add_argument("--out", metavar="PATH", help="write deviation CSV to file")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_catalog = sub.add_parser("catalog", help="list or show built-in walls")
    p_catalog.add_argument("action", choices=("list", "show"))
    p_catalog.add_argument("id", nargs="?", help="catalog id (for show)")
    p_catalog.set_defaults(func=_cmd_catalog)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (InvalidConstructionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
