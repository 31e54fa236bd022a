"""Divisibility n | u_n for integer linear recurrences."""

__version__ = "0.0.1"
