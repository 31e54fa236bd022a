from __future__ import annotations
import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from pydantic import BaseModel, ValidationError

from ..core.config import settings
from ..core.errors import UsageError
from ..core.logging import get_logger
from ..core.lucas import lucas_spec
from ..schemas.recurrence import LucasSpec, RecurrenceSpec

log = get_logger(__name__)

FORMATS = ("csv", "jsonl", "json")


def int_list(text: str) -> List[int]:
    """'1,-2,3' -> [1, -2, 3]; argparse type."""
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (RECDIV_SEED overrides)")
    p.add_argument("--workers", type=int, default=None, help="process pool size")
    p.add_argument("--output", "-o", default=None, help="write the artifact here instead of stdout")
    p.add_argument("--format", choices=FORMATS, default=None)
    return p


def spec_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--spec", default=None, help='JSON file {"coeffs": [...], "init": [...]}')
    p.add_argument("--coeffs", type=int_list, default=None, help="a1,...,ak")
    p.add_argument("--init", type=int_list, default=None, help="u0,...,u_{k-1}")
    return p


def lucas_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--a1", type=int, default=None)
    p.add_argument("--a2", type=int, default=None)
    return p


def resolve_seed(args: argparse.Namespace) -> int:
    if settings.seed_from_env():
        return settings.SEED
    return args.seed if args.seed is not None else settings.SEED


def load_spec_file(path: str) -> RecurrenceSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read spec file {path}: {exc}") from exc
    if not isinstance(data, dict) or not {"coeffs", "init"} <= data.keys():
        raise UsageError(f"spec file {path} needs keys 'coeffs' and 'init'")
    try:
        return RecurrenceSpec(coeffs=data["coeffs"], init=data["init"])
    except ValidationError as exc:
        raise UsageError(f"malformed spec file {path}: {exc.errors()[0]['msg']}") from exc


def load_spec(args: argparse.Namespace) -> RecurrenceSpec:
    """Spec from --spec, --coeffs/--init, or a Lucas pair --a1/--a2, in that order."""
    if getattr(args, "spec", None):
        return load_spec_file(args.spec)
    if getattr(args, "coeffs", None) is not None:
        if args.init is None:
            raise UsageError("--coeffs needs --init")
        return RecurrenceSpec(coeffs=args.coeffs, init=args.init)
    if getattr(args, "a1", None) is not None and getattr(args, "a2", None) is not None:
        return lucas_spec(args.a1, args.a2).recurrence()
    raise UsageError("give a recurrence via --spec, --coeffs/--init or --a1/--a2")


def load_lucas(args: argparse.Namespace) -> LucasSpec:
    if args.a1 is None or args.a2 is None:
        raise UsageError("--a1 and --a2 are required")
    return lucas_spec(args.a1, args.a2)


def _plain(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if isinstance(obj, (list, tuple)):
        return [_plain(o) for o in obj]
    return obj


def _csv_cell(v: Any) -> Any:
    return json.dumps(v) if isinstance(v, (list, dict)) else v


def render(payload: Any, fmt: str, columns: Optional[Sequence[str]] = None) -> str:
    data = _plain(payload)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    rows: Iterable[Dict[str, Any]] = data if isinstance(data, list) else [data]
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in rows)
    rows = list(rows)
    fields = list(columns) if columns else (list(rows[0].keys()) if rows else [])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _csv_cell(v) for k, v in r.items()})
    return buf.getvalue()


def emit(args: argparse.Namespace, payload: Any, *, columns: Optional[Sequence[str]] = None) -> int:
    """Write payload in the chosen format to --output or stdout."""
    fmt = args.format or args.default_format
    text = render(payload, fmt, columns)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        log.info("artifact.written path=%s format=%s", args.output, fmt)
    else:
        sys.stdout.write(text)
    return 0
