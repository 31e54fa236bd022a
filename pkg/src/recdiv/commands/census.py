from __future__ import annotations
import argparse

from ..core.census import (
    census,
    census_excluding_zero_multiples,
    census_poly,
    composite_members,
    order_one_reference,
    partition_m,
    ratio_rows,
)
from ..core.recurrence import require_simple, validate_spec
from ..schemas.recurrence import PolySpec, RecurrenceSpec
from .common import common_options, emit, int_list, load_spec, lucas_options, spec_options

CSV_COLUMNS = ("x", "count", "count_logx_over_x", "count_Lx_over_x")


def _payload(report, args: argparse.Namespace):
    rows = ratio_rows(report)
    if (args.format or args.default_format) == "json":
        return {"report": report.model_dump(mode="json"), "ratios": [r.model_dump() for r in rows]}
    return rows


def _run_census(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    if spec.order > 1:
        require_simple(validate_spec(spec))
    rep = census(spec, args.x, args.checkpoints, workers=args.workers)
    extra = dict(rep.extra)
    if args.composites:
        extra["composites"] = composite_members(rep)
    if spec.order == 1:
        extra["order_one_reference"] = order_one_reference(spec, args.x)
    rep = rep.model_copy(update={"extra": extra})
    return emit(args, _payload(rep, args), columns=CSV_COLUMNS)


def _run_census_m(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    require_simple(validate_spec(spec))
    rep = census_excluding_zero_multiples(spec, args.x, args.zero_bound, args.checkpoints, workers=args.workers)
    if args.partition:
        extra = dict(rep.extra, partition=partition_m(spec, rep).model_dump())
        rep = rep.model_copy(update={"extra": extra})
    return emit(args, _payload(rep, args), columns=CSV_COLUMNS)


def _run_census_poly(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    g = PolySpec(coefficients=args.g)
    rep = census_poly(spec, g, args.x, args.checkpoints, workers=args.workers)
    return emit(args, _payload(rep, args), columns=CSV_COLUMNS)


def _run_pseudoprimes(args: argparse.Namespace) -> int:
    # u_n = 2^n - 2
    spec = RecurrenceSpec(coeffs=[3, -2], init=[-1, 0])
    rep = census(spec, args.x, workers=args.workers)
    return emit(args, [{"n": n} for n in composite_members(rep)])


def register(sub: argparse._SubParsersAction) -> None:
    parents = [common_options(), spec_options(), lucas_options()]

    p = sub.add_parser("census", parents=parents, help="N_u(x) with checkpoint ratios")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--checkpoints", type=int_list, default=None)
    p.add_argument("--composites", action="store_true", help="list composite members (JSON only)")
    p.set_defaults(handler=_run_census, default_format="csv")

    p = sub.add_parser("census-m", parents=parents, help="M_u(x): N_u(x) without p*n0 forms")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--zero-bound", type=int, default=None)
    p.add_argument("--checkpoints", type=int_list, default=None)
    p.add_argument("--partition", action="store_true", help="add the M1/M2/M3 split (JSON only)")
    p.set_defaults(handler=_run_census_m, default_format="csv")

    p = sub.add_parser("census-poly", parents=parents, help="N_{u,g}(x) = {n : g(n) | u_n}")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--g", type=int_list, required=True, help="g coefficients, constant term first")
    p.add_argument("--checkpoints", type=int_list, default=None)
    p.set_defaults(handler=_run_census_poly, default_format="csv")

    p = sub.add_parser("pseudoprimes", parents=[common_options()], help="composite n <= x with n | 2^n - 2")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_run_pseudoprimes, default_format="csv")
