from __future__ import annotations
import argparse

from ..core.census import resolve_workers
from ..core.constructions import (
    default_y,
    discriminant_power_members,
    lucas_special_count,
    lucas_special_members,
    primitive_prime_factors,
    special_primes,
    verify_membership,
    verify_remark_sequence,
    zero_term_members,
)
from .common import common_options, emit, load_lucas, load_spec, lucas_options, resolve_seed, spec_options


def _has_spec(args: argparse.Namespace) -> bool:
    return bool(args.spec or args.coeffs is not None or (args.a1 is not None and args.a2 is not None))


def _run_special_primes(args: argparse.Namespace) -> int:
    z = args.z if args.z is not None else args.y**args.v
    return emit(args, special_primes(args.y, z))


def _run_lucas_special(args: argparse.Namespace) -> int:
    y = args.y if args.y is not None else default_y(args.x)
    if args.count:
        count, r = lucas_special_count(args.x, y, v=args.v)
        return emit(args, {"x": args.x, "y": y, "v": args.v, "r": r, "count": count})
    certs = lucas_special_members(args.x, y, r_mode=args.r_mode, v=args.v)
    if _has_spec(args):
        certs = verify_membership(load_spec(args), certs, workers=resolve_workers(args.workers))
    return emit(args, certs)


def _run_disc_power(args: argparse.Namespace) -> int:
    ls = load_lucas(args)
    return emit(args, discriminant_power_members(ls, args.x, args.e, seed=resolve_seed(args)))


def _run_zero_term(args: argparse.Namespace) -> int:
    return emit(args, zero_term_members(load_spec(args), args.n0, args.x))


def _run_remark(args: argparse.Namespace) -> int:
    return emit(args, verify_remark_sequence(args.x))


def _run_primitive(args: argparse.Namespace) -> int:
    ls = load_lucas(args)
    return emit(args, primitive_prime_factors(ls, args.n, seed=resolve_seed(args)))


def register(sub: argparse._SubParsersAction) -> None:
    common = common_options()
    with_spec = [common, spec_options(), lucas_options()]

    p = sub.add_parser("special-primes", parents=[common], help="primes p in (y, z] with p^2 - 1 | M_y")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--z", type=float, default=None)
    p.add_argument("--v", type=float, default=4 / 3, help="z = y^v when --z is absent")
    p.set_defaults(handler=_run_special_primes, default_format="json")

    p = sub.add_parser("lucas-special", parents=with_spec, help="n = 2 s M_y <= x certificates")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=float, default=None, help="default log x / log log x")
    p.add_argument("--v", type=float, default=4 / 3)
    p.add_argument("--r-mode", choices=("all", "exact"), default="all")
    p.add_argument("--count", action="store_true", help="report #L(x) and r for the exact mode")
    p.set_defaults(handler=_run_lucas_special, default_format="jsonl")

    p = sub.add_parser("disc-power", parents=[common, lucas_options()], help="members from powers of r | delta")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--e", type=int, default=2)
    p.set_defaults(handler=_run_disc_power, default_format="jsonl")

    p = sub.add_parser("zero-term", parents=with_spec, help="members p * n0 with u_{n0} = 0")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_run_zero_term, default_format="jsonl")

    p = sub.add_parser("verify-remark", parents=[common], help="2p | u_{2p} for 10^n - 7^n - 2*5^n - 1")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_run_remark, default_format="json")

    p = sub.add_parser("primitive", parents=[common, lucas_options()], help="primitive prime factors of u_n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_run_primitive, default_format="json")
