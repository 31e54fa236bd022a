# tests/conftest.py
from __future__ import annotations
import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"   # contains the "recdiv" package
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))
