"""Line-oriented text formats for jets and series.

Jet file::

    n 2
    m 3
    field exact
    coeff 3 1
    coeff 4 -1/3

Series file::

    n 2
    m 3
    a 1
    field exact
    trunc 4
    term 0 6

``#`` starts a comment.  Values are integers, ``p/q`` rationals or decimals.
A decimal in an exact file switches the whole file to float, with a warning.
Zero coefficients and terms are omitted on output; ``trunc`` records how far
the series is valid and defaults to the largest ``term`` index when absent.
"""

from __future__ import annotations

import math
import re
import warnings
from fractions import Fraction

from .forward import SolutionJet
from .puiseux import PuiseuxSeries
from .series import EXACT, FLOAT

_INT = re.compile(r"^[+-]?\d+$")
_RATIONAL = re.compile(r"^[+-]?\d+/\d+$")


class ParseError(ValueError):
    pass


class PrecisionWarning(UserWarning):
    """A decimal literal forced float arithmetic in an exact file."""


def _is_decimal(token: str) -> bool:
    if _INT.match(token) or _RATIONAL.match(token):
        return False
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"not a finite number: {token!r}")
    return True


def parse_value(token: str, field: str):
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a finite number: {token!r}") from None
    if field == FLOAT:
        return float(token) if _is_decimal(token) else float(value)
    return value


def format_value(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(token: str, lineno: int) -> int:
    if not _INT.match(token):
        raise ParseError(f"line {lineno}: expected an integer, got {token!r}")
    return int(token)


def _read(text: str, headers: tuple, indexed: str):
    head: dict = {}
    entries: list = []
    for lineno, parts in _lines(text):
        key = parts[0]
        if key == indexed:
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: expected '{indexed} <index> <value>'")
            entries.append((lineno, _int(parts[1], lineno), parts[2]))
        elif key in headers:
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected '{key} <value>'")
            if key in head:
                raise ParseError(f"line {lineno}: duplicate '{key}' line")
            head[key] = (lineno, parts[1])
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    idx = [k for _, k, _ in entries]
    if len(set(idx)) != len(idx):
        raise ParseError(f"duplicate {indexed} index")
    if idx != sorted(idx):
        raise ParseError(f"{indexed} lines must be in ascending order")
    return head, entries


def _field(head: dict, tokens: list) -> str:
    if "field" not in head:
        raise ParseError("missing 'field' line")
    lineno, field = head["field"]
    if field not in (EXACT, FLOAT):
        raise ParseError(f"line {lineno}: field must be 'exact' or 'float'")
    if field == EXACT and any(_is_decimal(t) for t in tokens):
        warnings.warn("decimal literal in an exact file; reading it as float", PrecisionWarning, stacklevel=3)
        field = FLOAT
    for t in tokens:
        _is_decimal(t)
    return field


def _require(head: dict, key: str) -> tuple:
    if key not in head:
        raise ParseError(f"missing '{key}' line")
    return head[key]


def _header_int(head: dict, key: str) -> int:
    lineno, token = _require(head, key)
    return _int(token, lineno)


def parse_jet(text: str) -> SolutionJet:
    head, entries = _read(text, ("n", "m", "field"), "coeff")
    n = _header_int(head, "n")
    m = _header_int(head, "m")
    field = _field(head, [v for _, _, v in entries])
    values = {}
    for lineno, k, token in entries:
        if k < m:
            raise ParseError(f"line {lineno}: coeff index {k} is below m = {m}")
        values[k] = parse_value(token, field)
    if not values:
        raise ParseError("no coeff lines")
    top = max(values)
    zero = parse_value("0", field)
    try:
        return SolutionJet(n, m, [values.get(k, zero) for k in range(m, top + 1)], field)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_jet(jet: SolutionJet) -> str:
    out = [f"n {jet.n}", f"m {jet.m}", f"field {jet.field}"]
    for k, c in enumerate(jet.coeffs):
        if c != 0:
            out.append(f"coeff {jet.m + k} {format_value(c)}")
    return "\n".join(out) + "\n"


def parse_puiseux(text: str) -> PuiseuxSeries:
    head, entries = _read(text, ("n", "m", "a", "field", "trunc"), "term")
    n = _header_int(head, "n")
    m = _header_int(head, "m")
    a_token = _require(head, "a")[1]
    field = _field(head, [a_token] + [v for _, _, v in entries])
    terms = [(j, parse_value(token, field)) for _, j, token in entries]
    trunc = _header_int(head, "trunc") if "trunc" in head else None
    try:
        return PuiseuxSeries(n, m, parse_value(a_token, field), terms, trunc, field)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_puiseux(ps: PuiseuxSeries) -> str:
    out = [f"n {ps.n}", f"m {ps.m}", f"a {format_value(ps.a)}", f"field {ps.field}", f"trunc {ps.trunc_j}"]
    out += [f"term {j} {format_value(q)}" for j, q in ps.terms]
    return "\n".join(out) + "\n"
