"""Value literals for machine input and output.

    NAT  ::= decimal
    UNIT ::= "()"
    PAIR ::= "(" v ", " v ")"
    SUM  ::= "inl " v | "inr " v
"""
from __future__ import annotations

import re

from lratt.core import Inj, Nat, Pair, Prod, Sum, Term, Type, Unit, UnitVal, Zero, Suc, is_value_type, numeral
from lratt.errors import LiteralError


def print_value(v: Term) -> str:
    match v:
        case UnitVal():
            return "()"
        case Zero():
            return "0"
        case Suc() if v.numeral is not None:
            return str(v.numeral)
        case Pair(l, r):
            return f"({print_value(l)}, {print_value(r)})"
        case Inj(i, arg):
            return f"{'inl' if i == 1 else 'inr'} {print_value(arg)}"
    raise LiteralError(f"not a first-order value: {v}")


_SPACE = re.compile(r"\s*")
_NUM = re.compile(r"[0-9]+")


def parse_value_literal(text: str, a: Type) -> Term:
    if not is_value_type(a):
        raise LiteralError(f"{a} is not a value type")
    v, i = _parse(text, _SPACE.match(text, 0).end(), a)
    i = _SPACE.match(text, i).end()
    if i != len(text):
        raise LiteralError(f"trailing input in literal {text!r}")
    return v


def _parse(text: str, i: int, a: Type) -> tuple[Term, int]:
    i = _SPACE.match(text, i).end()
    match a:
        case Nat():
            m = _NUM.match(text, i)
            if m is None:
                raise LiteralError(f"expected a natural number at {i} in {text!r}")
            return numeral(int(m.group())), m.end()
        case Unit():
            if text.startswith("()", i):
                return UnitVal(), i + 2
            raise LiteralError(f"expected () at {i} in {text!r}")
        case Prod(l, r):
            i = _lit(text, i, "(")
            v1, i = _parse(text, i, l)
            i = _lit(text, i, ",")
            v2, i = _parse(text, i, r)
            i = _lit(text, i, ")")
            return Pair(v1, v2), i
        case Sum(l, r):
            for tag, idx, ty in (("inl", 1, l), ("inr", 2, r)):
                if text.startswith(tag, i) and i + 3 < len(text) and text[i + 3].isspace():
                    v, j = _parse(text, i + 3, ty)
                    return Inj(idx, v), j
            raise LiteralError(f"expected inl or inr at {i} in {text!r}")
    raise LiteralError(f"{a} is not a value type")


def _lit(text: str, i: int, s: str) -> int:
    i = _SPACE.match(text, i).end()
    if not text.startswith(s, i):
        raise LiteralError(f"expected {s!r} at {i} in {text!r}")
    return i + len(s)
