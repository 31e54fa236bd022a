from __future__ import annotations
import argparse

from ..core.errors import UsageError
from ..core.lucas import q_gamma_set, somer_check, z_composite, z_prime
from .common import common_options, emit, load_lucas, lucas_options


def _run_z(args: argparse.Namespace) -> int:
    ls = load_lucas(args)
    if args.p is not None:
        return emit(args, {"p": args.p, "z": z_prime(ls, args.p).z})
    if args.m is not None:
        return emit(args, {"m": args.m, "z": z_composite(ls, args.m).z})
    raise UsageError("z needs --p or --m")


def _run_q_gamma(args: argparse.Namespace) -> int:
    ls = load_lucas(args)
    rep = q_gamma_set(ls, args.x, args.gamma)
    return emit(args, rep)


def _run_somer(args: argparse.Namespace) -> int:
    ls = load_lucas(args)
    return emit(args, {"a1": ls.a1, "a2": ls.a2, "delta": ls.delta, "finite": somer_check(ls)})


def register(sub: argparse._SubParsersAction) -> None:
    parents = [common_options(), lucas_options()]

    p = sub.add_parser("z", parents=parents, help="rank of apparition z(p) or z(m)")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(handler=_run_z, default_format="json")

    p = sub.add_parser("q-gamma", parents=parents, help="primes p <= x with z(p) <= p^gamma")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(handler=_run_q_gamma, default_format="json")

    p = sub.add_parser("somer", parents=parents, help="is N_u finite (delta = 1)?")
    p.set_defaults(handler=_run_somer, default_format="json")
