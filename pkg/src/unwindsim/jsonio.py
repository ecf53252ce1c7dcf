"""Canonical JSON read/write shared by every file format in the package.

Byte-exact golden files depend on two rules enforced here: floats are
serialized with Python's shortest round-trip repr (the json default), and
documents are written with fixed key order and separators. Infinities are
not valid JSON, so +inf round-trips as null where a schema allows it.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from pathlib import Path

from .errors import FormatError


def canonical_dumps(doc: dict) -> str:
    """Deterministic compact serialization used for hashing and replay logs."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)


def doc_hash(doc: dict) -> str:
    """sha256 of the canonical serialization (whitespace-insensitive)."""
    return hashlib.sha256(canonical_dumps(doc).encode("utf-8")).hexdigest()


def dump_json(doc: dict, path, compact: bool = False) -> bytes:
    """Write a document; returns the exact bytes written."""
    if compact:
        text = canonical_dumps(doc)
    else:
        text = json.dumps(doc, indent=1, sort_keys=True, allow_nan=False)
    data = (text + "\n").encode("utf-8")
    Path(path).write_bytes(data)
    return data


def dumps_bytes(doc: dict, compact: bool = False) -> bytes:
    if compact:
        return (canonical_dumps(doc) + "\n").encode("utf-8")
    return (json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n").encode("utf-8")


def load_json(path, expect_format: str | None = None) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if expect_format is not None:
        check_format(doc, expect_format)
    return doc


def check_format(doc: dict, expected: str) -> None:
    got = doc.get("format") if isinstance(doc, dict) else None
    if got != expected:
        raise FormatError(f'expected "format": "{expected}", got {got!r}')


def inf_to_null(x: float):
    """Map +inf to null for JSON; finite values pass through."""
    return None if math.isinf(x) else x


def null_to_inf(x):
    return math.inf if x is None else float(x)


def golden_regen_enabled() -> bool:
    """Goldens are frozen; set UNWIND_SIM_GOLDEN_REGEN=1 to rewrite them."""
    return os.environ.get("UNWIND_SIM_GOLDEN_REGEN", "") == "1"
