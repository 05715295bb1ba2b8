"""plnr: exact engine for planar functions, semifields and relative difference sets."""

__version__ = "0.1.0"

from .common import Convention, PlnrError, InvariantBreach, ProductRule
from .engine import Engine
from .jobSpec import JobSpec, COMMANDS

__all__ = [
    "Engine",
    "JobSpec",
    "COMMANDS",
    "Convention",
    "ProductRule",
    "PlnrError",
    "InvariantBreach",
]
