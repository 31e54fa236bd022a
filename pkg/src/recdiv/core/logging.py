import logging, sys

from .config import settings

FORMAT = "%(asctime)s %(levelname)s %(name)s - %(message)s"


def _level() -> str:
    return "DEBUG" if settings.DEBUG else settings.LOG_LEVEL.upper()


def _configure_root_logger() -> None:
    # stderr: stdout is reserved for report artifacts
    root = logging.getLogger()
    root.setLevel(_level())
    if any(isinstance(h, logging.StreamHandler) for h in root.handlers):
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(FORMAT))
    root.addHandler(handler)

_configure_root_logger()

def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
