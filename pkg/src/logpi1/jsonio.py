"""Canonical JSON helpers: sorted keys, rationals as "num/den" strings."""
from __future__ import annotations

import json
from fractions import Fraction

from .exactlin import Matrix


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"cannot parse rational from {s!r}")


def vec_to_json(v: dict, labels=None) -> dict:
    if labels is None:
        return {str(k): rat(c) for k, c in sorted(v.items())}
    return {labels[k]: rat(c) for k, c in sorted(v.items())}


def matrix_to_json(m: Matrix) -> list:
    return [[rat(x) for x in row] for row in m.to_rows()]


def matrix_from_json(rows: list, nrows: int, ncols: int) -> Matrix:
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise ValueError(f"matrix shape mismatch: expected {nrows}x{ncols}")
    return Matrix.from_rows([[parse_rat(x) for x in r] for r in rows], ncols)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
