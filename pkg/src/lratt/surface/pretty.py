"""Printing of types, terms and programs in parseable concrete syntax."""
from __future__ import annotations

from lratt.core import (
    Adv,
    Ann,
    App,
    Box,
    BoxT,
    Case,
    Delay,
    DelayT,
    Fix,
    FixT,
    Fun,
    Inj,
    Into,
    Lam,
    Later,
    Heap,
    Loc,
    Nat,
    NullStore,
    SingleHeap,
    Store,
    TickedStore,
    Now,
    Out,
    Pair,
    Prod,
    Proj,
    RecNat,
    RecUntil,
    Suc,
    Sum,
    Term,
    TVar,
    Type,
    Unbox,
    Unit,
    UnitVal,
    Until,
    Var,
    Wait,
    Zero,
    match_fair,
    match_stream,
)

# type precedence levels
_T_FIX, _T_ARROW, _T_UNTIL, _T_SUM, _T_PROD, _T_PREFIX, _T_ATOM = range(7)


def format_type(a: Type) -> str:
    return _ty(a, _T_FIX)


def _paren(s: str, inner: int, outer: int) -> str:
    return f"({s})" if inner < outer else s


def _ty(a: Type, ctx: int) -> str:
    match a:
        case TVar(name):
            return name
        case Unit():
            return "Unit"
        case Nat():
            return "Nat"
        case Fun(l, r):
            return _paren(f"{_ty(l, _T_UNTIL)} -> {_ty(r, _T_ARROW)}", _T_ARROW, ctx)
        case Until(Unit(), r):
            return _paren(f"Dia {_ty(r, _T_PREFIX)}", _T_PREFIX, ctx)
        case Until(l, r):
            return _paren(f"{_ty(l, _T_SUM)} Until {_ty(r, _T_UNTIL)}", _T_UNTIL, ctx)
        case Sum(l, r):
            return _paren(f"{_ty(l, _T_PROD)} + {_ty(r, _T_SUM)}", _T_SUM, ctx)
        case Prod(l, r):
            return _paren(f"{_ty(l, _T_PREFIX)} * {_ty(r, _T_PROD)}", _T_PROD, ctx)
        case Box(b):
            return _paren(f"Box {_ty(b, _T_PREFIX)}", _T_PREFIX, ctx)
        case Delay(b):
            return _paren(f"Next {_ty(b, _T_PREFIX)}", _T_PREFIX, ctx)
        case Later(b):
            return _paren(f"Later {_ty(b, _T_PREFIX)}", _T_PREFIX, ctx)
        case Fix(var, body):
            elem = match_stream(a)
            if elem is not None:
                return _paren(f"Str {_ty(elem, _T_PREFIX)}", _T_PREFIX, ctx)
            if isinstance(body, Sum) and body.right == TVar(var) and var not in body.left.free_tvars:
                return _paren(f"Ev {_ty(body.left, _T_PREFIX)}", _T_PREFIX, ctx)
            fair = match_fair(a)
            if fair is not None:
                return _paren(f"Fair {_ty(fair[0], _T_PREFIX)} {_ty(fair[1], _T_PREFIX)}", _T_PREFIX, ctx)
            return _paren(f"Fix {var}. {_ty(body, _T_FIX)}", _T_FIX, ctx)
    raise TypeError(f"not a type: {a!r}")


# term precedence levels
_OPEN, _CONS, _APP, _ATOM = range(4)

_KEYWORD = {DelayT: "delay", Adv: "adv", BoxT: "box", Unbox: "unbox", Now: "now", Into: "into", Out: "out"}


def format_term(t: Term) -> str:
    return _tm(t, _OPEN)


def _tm(t: Term, ctx: int) -> str:
    match t:
        case Var(name):
            return name
        case UnitVal():
            return "()"
        case Zero():
            return "0"
        case Suc(arg):
            if t.numeral is not None:
                return str(t.numeral)
            return _paren(f"suc {_tm(arg, _ATOM)}", _APP, ctx)
        case Loc(loc):
            return f"<{loc}>"
        case Pair(l, r):
            return f"({_tm(l, _OPEN)}, {_tm(r, _OPEN)})"
        case Ann(arg, ty):
            return f"({_tm(arg, _OPEN)} : {format_type(ty)})"
        case Into(Pair(head, tail)):
            return _paren(f"{_tm(head, _APP)} :: {_tm(tail, _CONS)}", _CONS, ctx)
        case Lam(x, body, ann):
            binder = x if ann is None else f"({x} : {format_type(ann)})"
            return _paren(f"fun {binder}. {_tm(body, _OPEN)}", _OPEN, ctx)
        case FixT(x, body):
            return _paren(f"fix {x}. {_tm(body, _OPEN)}", _OPEN, ctx)
        case App(fn, arg):
            return _paren(f"{_tm(fn, _APP)} {_tm(arg, _ATOM)}", _APP, ctx)
        case Proj(i, arg):
            return _paren(f"{'fst' if i == 1 else 'snd'} {_tm(arg, _ATOM)}", _APP, ctx)
        case Inj(i, arg):
            return _paren(f"{'inl' if i == 1 else 'inr'} {_tm(arg, _ATOM)}", _APP, ctx)
        case Wait(h, tl):
            return _paren(f"wait {_tm(h, _ATOM)} {_tm(tl, _ATOM)}", _APP, ctx)
        case Case(arg, x1, b1, x2, b2):
            s = f"case {_tm(arg, _OPEN)} of {{ inl {x1} -> {_tm(b1, _OPEN)} ; inr {x2} -> {_tm(b2, _OPEN)} }}"
            return _paren(s, _OPEN, ctx)
        case RecNat(base, x, y, step, arg):
            s = f"nrec {_tm(arg, _APP)} {{ zero -> {_tm(base, _OPEN)} ; suc {x} rec {y} -> {_tm(step, _OPEN)} }}"
            return _paren(s, _OPEN, ctx)
        case RecUntil(x, s_, x2, y, z, w, arg):
            s = (
                f"urec {_tm(arg, _APP)} {{ now {x} -> {_tm(s_, _OPEN)} ; "
                f"wait {x2} {y} rec {z} -> {_tm(w, _OPEN)} }}"
            )
            return _paren(s, _OPEN, ctx)
    kw = _KEYWORD.get(type(t))
    if kw is not None:
        return _paren(f"{kw} {_tm(t.arg if hasattr(t, 'arg') else t.body, _ATOM)}", _APP, ctx)
    raise TypeError(f"cannot print {t!r}")


def format_heap(h: Heap) -> str:
    inner = ", ".join(f"{loc} |-> {format_term(t)}" for loc, t in sorted(h.bindings.items()))
    return f"H{h.namespace}{{{inner}}}"


def format_store(s: Store) -> str:
    match s:
        case NullStore():
            return "null"
        case SingleHeap(h):
            return format_heap(h)
        case TickedStore(now, later):
            return f"{format_heap(now)} tick {format_heap(later)}"
    raise TypeError(f"not a store: {s!r}")


def format_program(decls) -> str:
    """Print ``(name, type, core term, entry, locked)`` declarations as a source file."""
    lines = []
    for name, ty, body, entry, locked in decls:
        prefix = ("entry " if entry else "") + ("locked " if locked else "") + "def"
        lines.append(f"{prefix} {name} : {format_type(ty)} =\n  {format_term(body)}\n")
    return "\n".join(lines)
