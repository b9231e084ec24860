"""JSON instance parsing and result encoding.

Rationals travel as strings (``"3/4"``, ``"-2"``, ``"1.5"``) or JSON
integers; JSON floats are refused.  Complex entries are ``[re, im]`` pairs.
Matrices are row-major lists of rows.
"""

from __future__ import annotations

from fractions import Fraction

from .complex_engine import ComplexOperator, GaussianRational
from .lattice import Band, DiagonalOrthomorphism, Operator


class InputError(ValueError):
    """The instance document is malformed."""


def rational(value, where: str = "value") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"{where}: expected an integer or a rational string, got {value!r}")
    try:
        return Fraction(value.strip() if isinstance(value, str) else value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: cannot parse {value!r} as a rational ({exc})") from None


def vector(value, where: str, length: int | None = None) -> tuple:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list")
    if length is not None and len(value) != length:
        raise InputError(f"{where}: expected length {length}, got {len(value)}")
    return tuple(rational(v, f"{where}[{i}]") for i, v in enumerate(value))


def matrix(value, where: str, rows: int | None = None, cols: int | None = None) -> Operator:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list of rows")
    if rows is not None and len(value) != rows:
        raise InputError(f"{where}: expected {rows} rows, got {len(value)}")
    if cols is None:
        if not value:
            raise InputError(f"{where}: empty matrix needs an explicit column count")
        cols = len(value[0]) if isinstance(value[0], list) else -1
    grid = [vector(r, f"{where}[{i}]", cols) for i, r in enumerate(value)]
    return Operator(len(grid), cols, grid)


def complex_value(value, where: str) -> GaussianRational:
    if isinstance(value, list):
        if len(value) != 2:
            raise InputError(f"{where}: complex entries are [re, im] pairs")
        return GaussianRational(rational(value[0], where), rational(value[1], where))
    return GaussianRational(rational(value, where))


def complex_matrix(value, where: str, rows: int | None = None,
                   cols: int | None = None) -> ComplexOperator:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list of rows")
    if rows is not None and len(value) != rows:
        raise InputError(f"{where}: expected {rows} rows, got {len(value)}")
    if cols is None:
        if not value or not isinstance(value[0], list):
            raise InputError(f"{where}: cannot infer column count")
        cols = len(value[0])
    grid = []
    for i, r in enumerate(value):
        if not isinstance(r, list) or len(r) != cols:
            raise InputError(f"{where}[{i}]: expected {cols} entries")
        grid.append([complex_value(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)])
    return ComplexOperator(len(grid), cols, grid)


def require(doc: dict, key: str):
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


def optional_int(doc: dict, key: str) -> int | None:
    if key not in doc:
        return None
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise InputError(f"{key}: expected a nonnegative integer")
    return v


def list_of(doc: dict, key: str, count: int | None = None) -> list:
    value = require(doc, key)
    if not isinstance(value, list):
        raise InputError(f"{key}: expected a list")
    if count is not None and len(value) != count:
        raise InputError(f"{key}: expected {count} items, got {len(value)}")
    return value


# --------------------------------------------------------------------------
# Encoding


def enc_q(q: Fraction) -> str:
    return str(q)


def enc_vec(v) -> list:
    return [enc_q(c) for c in v]


def enc_op(op: Operator) -> list:
    return [enc_vec(r) for r in op.entries]


def enc_band(b: Band) -> list:
    return b.sorted_members()


def enc_diag(d: DiagonalOrthomorphism) -> list:
    return enc_vec(d.diag)


def enc_c(z: GaussianRational) -> list:
    return [enc_q(z.re), enc_q(z.im)]
