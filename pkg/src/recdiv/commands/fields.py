from __future__ import annotations
import argparse

from ..core.finite_field import factor_mod_p, root_count_congruence, small_t_census, t_general
from ..core.modular import period_mod
from ..core.recurrence import validate_spec
from .common import common_options, emit, load_spec, lucas_options, resolve_seed, spec_options


def _run_t_index(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    return emit(args, t_general(spec, args.p, args.cap, seed=resolve_seed(args)))


def _run_small_t(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    return emit(args, small_t_census(spec, args.x, args.y, seed=resolve_seed(args)))


def _run_period(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    return emit(args, period_mod(spec, args.m))


def _run_root_count(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    return emit(args, root_count_congruence(spec, args.p, args.x))


def _run_discriminant(args: argparse.Namespace) -> int:
    vr = validate_spec(load_spec(args))
    payload = vr.model_dump(mode="json")
    if args.p is not None:
        payload["factors_mod_p"] = [
            {"factor": g.coefficients, "multiplicity": m}
            for g, m in factor_mod_p(vr.char_poly, args.p, seed=resolve_seed(args))
        ]
    return emit(args, payload)


def register(sub: argparse._SubParsersAction) -> None:
    parents = [common_options(), spec_options(), lucas_options()]

    p = sub.add_parser("t-index", parents=parents, help="T_u(p) by determinant search")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--cap", type=int, default=None, help="search cap (default p^2)")
    p.set_defaults(handler=_run_t_index, default_format="json")

    p = sub.add_parser("small-t", parents=parents, help="#{p <= x : T_u(p) <= y}")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.set_defaults(handler=_run_small_t, default_format="json")

    p = sub.add_parser("period", parents=parents, help="period and preperiod of u mod m")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(handler=_run_period, default_format="json")

    p = sub.add_parser("root-count", parents=parents, help="#{n <= x : p | u_n}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_run_root_count, default_format="json")

    p = sub.add_parser("discriminant", parents=parents, help="f_u, its discriminant and degeneracy")
    p.add_argument("--p", type=int, default=None, help="also factor f_u mod p")
    p.set_defaults(handler=_run_discriminant, default_format="json")
