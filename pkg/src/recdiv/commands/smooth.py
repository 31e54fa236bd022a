from __future__ import annotations
import argparse

from ..core.smoothness import factorize, pi_smooth_table, psi, smooth_primes
from .common import common_options, emit, resolve_seed


def _run_psi(args: argparse.Namespace) -> int:
    return emit(args, psi(args.x, args.y))


def _run_pi_smooth(args: argparse.Namespace) -> int:
    primes = smooth_primes(args.x, args.y)
    return emit(args, {"x": args.x, "y": args.y, "count": len(primes), "primes": primes})


def _run_pi_table(args: argparse.Namespace) -> int:
    vs = args.v or [1.1, 4 / 3]
    return emit(args, pi_smooth_table(args.y, vs))


def _run_factor(args: argparse.Namespace) -> int:
    return emit(args, factorize(args.n, seed=resolve_seed(args)))


def register(sub: argparse._SubParsersAction) -> None:
    parents = [common_options()]

    p = sub.add_parser("psi", parents=parents, help="Psi(x, y): y-smooth n <= x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=float, required=True)
    p.set_defaults(handler=_run_psi, default_format="json")

    p = sub.add_parser("pi-smooth", parents=parents, help="Pi(x, y): primes p <= x, p^2 - 1 y-smooth")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.set_defaults(handler=_run_pi_smooth, default_format="json")

    p = sub.add_parser("pi-table", parents=parents, help="Pi(y^v, y) / y^v per v")
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--v", type=float, action="append", default=None)
    p.set_defaults(handler=_run_pi_table, default_format="csv")

    p = sub.add_parser("factor", parents=parents, help="factorization with omega, tau and P(n)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_run_factor, default_format="json")
