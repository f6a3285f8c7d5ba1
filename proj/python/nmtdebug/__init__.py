"""Attention-based confidence scoring and inspection for NMT output."""

from ._core import *  # noqa: F401,F403
from ._core import (
    Error,
    IndexFormatError,
    IndexVersionError,
    PairingError,
    ParseError,
    RecordError,
    SortKeyError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
