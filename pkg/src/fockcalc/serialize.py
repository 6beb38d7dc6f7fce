"""Coefficient file I/O.

Shared JSON schema for series and kernels:

    {"kind": "series", "d": 1, "max_degree": N,
     "entries": [{"alpha": [...], "re": x, "im": y}, ...]}

    {"kind": "kernel", "d2": 1, "d1": 1, "max_degree": N,
     "entries": [{"alpha": [...], "beta": [...], "re": x, "im": y}, ...]}

Entries are written in canonical (degree, lexicographic) order and
max_degree always equals the support degree, so serialization is
deterministic and round trips byte-identically.
"""

from __future__ import annotations

import json
from typing import Union

from .errors import SchemaError
from .multiindex import total_degree
from .series import KernelCoeffs, SeriesCoeffs

Coeffs = Union[SeriesCoeffs, KernelCoeffs]


def _canon_float(x: float) -> float:
    return 0.0 if x == 0 else float(x)


def _check_index(raw, d: int, max_degree: int, what: str) -> tuple:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{what} must be a non-empty list of integers")
    for a in raw:
        if not isinstance(a, int) or isinstance(a, bool) or a < 0:
            raise SchemaError(f"{what} entries must be non-negative integers, got {raw!r}")
    if len(raw) != d:
        raise SchemaError(f"{what} {raw!r} has dimension {len(raw)}, expected {d}")
    if sum(raw) > max_degree:
        raise SchemaError(f"{what} {raw!r} exceeds declared max_degree {max_degree}")
    return tuple(raw)


def _get_dim(doc: dict, field: str) -> int:
    v = doc.get(field)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise SchemaError(f"field {field!r} must be a positive integer")
    return v


def coeffs_from_jsonable(doc) -> Coeffs:
    if not isinstance(doc, dict):
        raise SchemaError("coefficient document must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("series", "kernel"):
        raise SchemaError(f"field 'kind' must be 'series' or 'kernel', got {kind!r}")
    max_degree = doc.get("max_degree")
    if not isinstance(max_degree, int) or isinstance(max_degree, bool) or max_degree < 0:
        raise SchemaError("field 'max_degree' must be a non-negative integer")
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, list):
        raise SchemaError("field 'entries' must be a list")

    def value_of(rec) -> complex:
        re, im = rec.get("re", 0.0), rec.get("im", 0.0)
        if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
            raise SchemaError("entry fields 're'/'im' must be numbers")
        return complex(re, im)

    if kind == "series":
        d = _get_dim(doc, "d")
        entries = {}
        for rec in raw_entries:
            if not isinstance(rec, dict):
                raise SchemaError("entries must be objects")
            alpha = _check_index(rec.get("alpha"), d, max_degree, "alpha")
            if alpha in entries:
                raise SchemaError(f"duplicate index {alpha}")
            entries[alpha] = value_of(rec)
        return SeriesCoeffs(d, entries)

    d2 = _get_dim(doc, "d2")
    d1 = _get_dim(doc, "d1")
    entries = {}
    for rec in raw_entries:
        if not isinstance(rec, dict):
            raise SchemaError("entries must be objects")
        alpha = _check_index(rec.get("alpha"), d2, max_degree, "alpha")
        beta = _check_index(rec.get("beta"), d1, max_degree, "beta")
        if (alpha, beta) in entries:
            raise SchemaError(f"duplicate index ({alpha}, {beta})")
        entries[(alpha, beta)] = value_of(rec)
    return KernelCoeffs(d2, d1, entries)


def coeffs_to_jsonable(c: Coeffs) -> dict:
    if isinstance(c, SeriesCoeffs):
        keys = sorted(c.entries, key=lambda a: (total_degree(a), a))
        return {
            "kind": "series",
            "d": c.d,
            "max_degree": c.support_degree(),
            "entries": [
                {"alpha": list(a),
                 "re": _canon_float(c.entries[a].real),
                 "im": _canon_float(c.entries[a].imag)}
                for a in keys
            ],
        }
    if isinstance(c, KernelCoeffs):
        keys = sorted(c.entries, key=lambda k: (total_degree(k[0]), k[0], total_degree(k[1]), k[1]))
        return {
            "kind": "kernel",
            "d2": c.d2,
            "d1": c.d1,
            "max_degree": c.support_degree(),
            "entries": [
                {"alpha": list(a), "beta": list(b),
                 "re": _canon_float(c.entries[(a, b)].real),
                 "im": _canon_float(c.entries[(a, b)].imag)}
                for a, b in keys
            ],
        }
    raise TypeError(f"cannot serialize {type(c)!r}")


def load_coeffs(path: str) -> Coeffs:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON in {path}: {exc}") from exc
    return coeffs_from_jsonable(doc)


def save_coeffs(c: Coeffs, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(coeffs_to_jsonable(c), fh, indent=2)
        fh.write("\n")
