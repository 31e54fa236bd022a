from __future__ import annotations
import sys
import traceback
from typing import Callable

from pydantic import ValidationError

from .config import settings
from .logging import get_logger

log = get_logger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class RecdivError(Exception):
    """Base for every error the library raises on purpose."""

    kind = "domain_error"


class SpecError(RecdivError):
    """The recurrence (or Lucas pair) is invalid or outside what the tools accept."""

    kind = "spec_error"


class PreconditionError(RecdivError):
    """A named precondition of an operation does not hold (e.g. p | a2)."""

    kind = "precondition_failed"


class BudgetExceeded(RecdivError):
    """A configured resource cap (period states, factoring steps) was hit."""

    kind = "budget_exceeded"


class UsageError(RecdivError):
    """Malformed command line or spec file."""

    kind = "usage_error"


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    return EXIT_DOMAIN


def _describe(exc: BaseException) -> tuple[str, str]:
    if isinstance(exc, RecdivError):
        return exc.kind, str(exc)
    if isinstance(exc, ValidationError):
        msgs = "; ".join(e["msg"] for e in exc.errors())
        return "invalid_input", msgs
    return "internal_error", f"{exc.__class__.__name__}: {exc}"


def run_guarded(fn: Callable[[], int]) -> int:
    """Run a command body and translate exceptions into exit codes and stderr messages."""
    try:
        return fn()
    except (RecdivError, ValidationError) as exc:
        kind, message = _describe(exc)
        log.debug("command.failed kind=%s", kind)
        print(f"error={kind} message={message}", file=sys.stderr)
        return exit_code_for(exc)
    except Exception as exc:
        # Always log full details
        log.exception("unhandled.exception")
        kind, message = _describe(exc)
        print(f"error={kind} message={message}", file=sys.stderr)
        if settings.DEBUG:
            print(traceback.format_exc(), file=sys.stderr)
        return EXIT_DOMAIN
