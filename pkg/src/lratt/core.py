"""Abstract syntax of Lively RaTT: types, terms, typing contexts and machine stores.

Everything here is a plain immutable value.  Types compare up to renaming of
``Fix`` binders; terms compare structurally (source positions are ignored).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Optional, Union

from lratt.errors import ErrorKind, EvalError

Pos = Optional[tuple[int, int]]


# ---------------------------------------------------------------------------
# Types


class Mod(enum.Enum):
    """Time modalities, ordered DELAY <= LATER."""

    DELAY = "Next"
    LATER = "Later"


class Type:
    """Base class of the type grammar.  Equality is alpha-equivalence."""

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Type):
            return NotImplemented
        return self is other or self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    @cached_property
    def canonical(self) -> tuple:
        return _canon(self, ())

    @cached_property
    def free_tvars(self) -> frozenset[str]:
        return _ftv(self)

    def __str__(self) -> str:
        from lratt.surface.pretty import format_type

        return format_type(self)


@dataclass(frozen=True, eq=False)
class TVar(Type):
    name: str


@dataclass(frozen=True, eq=False)
class Unit(Type):
    pass


@dataclass(frozen=True, eq=False)
class Nat(Type):
    pass


@dataclass(frozen=True, eq=False)
class Prod(Type):
    left: Type
    right: Type


@dataclass(frozen=True, eq=False)
class Sum(Type):
    left: Type
    right: Type


@dataclass(frozen=True, eq=False)
class Fun(Type):
    arg: Type
    res: Type


@dataclass(frozen=True, eq=False)
class Box(Type):
    body: Type


@dataclass(frozen=True, eq=False)
class Delay(Type):
    """The LTL next-step modality (surface keyword ``Next``)."""

    body: Type


@dataclass(frozen=True, eq=False)
class Later(Type):
    """The guarded-recursion modality."""

    body: Type


@dataclass(frozen=True, eq=False)
class Fix(Type):
    var: str
    body: Type


@dataclass(frozen=True, eq=False)
class Until(Type):
    left: Type
    right: Type


def _canon(a: Type, bound: tuple[str, ...]) -> tuple:
    # de Bruijn form: bound variables become indices, free ones keep their name
    match a:
        case TVar(name):
            for i, b in enumerate(reversed(bound)):
                if b == name:
                    return ("bvar", i)
            return ("fvar", name)
        case Unit():
            return ("Unit",)
        case Nat():
            return ("Nat",)
        case Fix(var, body):
            return ("Fix", _canon(body, bound + (var,)))
        case Prod(l, r) | Sum(l, r) | Until(l, r):
            return (type(a).__name__, _canon(l, bound), _canon(r, bound))
        case Fun(l, r):
            return ("Fun", _canon(l, bound), _canon(r, bound))
        case Box(b) | Delay(b) | Later(b):
            return (type(a).__name__, _canon(b, bound))
    raise TypeError(f"not a type: {a!r}")


def _ftv(a: Type) -> frozenset[str]:
    match a:
        case TVar(name):
            return frozenset([name])
        case Unit() | Nat():
            return frozenset()
        case Fix(var, body):
            return body.free_tvars - {var}
        case Prod(l, r) | Sum(l, r) | Until(l, r) | Fun(l, r):
            return l.free_tvars | r.free_tvars
        case Box(b) | Delay(b) | Later(b):
            return b.free_tvars
    raise TypeError(f"not a type: {a!r}")


def modal(m: Mod, a: Type) -> Type:
    return Delay(a) if m is Mod.DELAY else Later(a)


def mod_leq(m: Mod, m2: Mod) -> bool:
    """Reflexive order on time modalities generated by DELAY <= LATER."""
    return m is m2 or (m is Mod.DELAY and m2 is Mod.LATER)


def subst_type(body: Type, var: str, repl: Type) -> Type:
    """Replace free ``var`` in ``body`` by ``repl``, renaming Fix binders on capture."""
    if var not in body.free_tvars:
        return body
    match body:
        case TVar(name):
            return repl if name == var else body
        case Fix(b, inner):
            if b == var:
                return body
            if b in repl.free_tvars:
                nb = fresh_name(b, repl.free_tvars | inner.free_tvars)
                inner = subst_type(inner, b, TVar(nb))
                b = nb
            return Fix(b, subst_type(inner, var, repl))
        case Prod(l, r) | Sum(l, r) | Until(l, r) | Fun(l, r):
            return type(body)(subst_type(l, var, repl), subst_type(r, var, repl))
        case Box(b) | Delay(b) | Later(b):
            return type(body)(subst_type(b, var, repl))
    raise TypeError(f"not a type: {body!r}")


def unfold_fix_type(f: Type) -> Type:
    """``Fix a. A`` to ``A[Later(Fix a. A)/a]``."""
    if not isinstance(f, Fix):
        raise ValueError(f"unfold of a non-Fix type {f}")
    return subst_type(f.body, f.var, Later(f))


def is_stable(a: Type) -> bool:
    match a:
        case Unit() | Nat() | Box(_):
            return True
        case Prod(l, r) | Sum(l, r):
            return is_stable(l) and is_stable(r)
    return False


def is_limit(a: Type) -> bool:
    match a:
        case TVar(_) | Unit() | Nat() | Later(_):
            return True
        case Delay(b) | Box(b):
            return is_limit(b)
        case Prod(l, r) | Sum(l, r):
            return is_limit(l) and is_limit(r)
        case Fun(_, r):
            return is_limit(r)
        case Fix(_, b):
            return is_limit(b)
    return False


def is_value_type(a: Type) -> bool:
    match a:
        case Unit() | Nat():
            return True
        case Prod(l, r) | Sum(l, r):
            return is_value_type(l) and is_value_type(r)
    return False


# the built-in abbreviations; the parser expands the same definitions


def stream_type(a: Type) -> Fix:
    v = fresh_name("s", a.free_tvars)
    return Fix(v, Prod(a, TVar(v)))


def event_type(a: Type) -> Fix:
    v = fresh_name("e", a.free_tvars)
    return Fix(v, Sum(a, TVar(v)))


def dia_type(a: Type) -> Until:
    return Until(Unit(), a)


def fair_type(a: Type, b: Type) -> Fix:
    v = fresh_name("f", a.free_tvars | b.free_tvars)
    return Fix(v, Until(a, Prod(b, Later(Until(b, Prod(a, TVar(v)))))))


def fair_prime_type(b: Type, a: Type) -> Until:
    return Until(b, Prod(a, Later(fair_type(a, b))))


def match_stream(a: Type) -> Optional[Type]:
    """Element type if ``a`` is ``Str A``, else None."""
    if isinstance(a, Fix) and isinstance(a.body, Prod) and a.body.right == TVar(a.var):
        if a.var not in a.body.left.free_tvars:
            return a.body.left
    return None


def match_fair(a: Type) -> Optional[tuple[Type, Type]]:
    if isinstance(a, Fix) and isinstance(a.body, Until):
        first, second = a.body.left, a.body.right
        if a.var not in first.free_tvars and isinstance(second, Prod):
            b = second.left
            if a.var not in b.free_tvars and a == fair_type(first, b):
                return first, b
    return None


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True, order=True)
class Location:
    namespace: int
    index: int

    def __str__(self) -> str:
        return f"l{self.namespace}.{self.index}"


class Term:
    """Base class of terms.  Derived properties are computed once per node."""

    pos: Pos

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return _free_vars(self)

    @cached_property
    def is_value(self) -> bool:
        return _is_value(self)

    @cached_property
    def inert(self) -> bool:
        """A value evaluating to itself: no ``delay`` in an evaluated position."""
        return _inert(self)

    def __str__(self) -> str:
        from lratt.surface.pretty import format_term

        return format_term(self)


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Term):
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class UnitVal(Term):
    pos: Pos = _pos()


@dataclass(frozen=True)
class Zero(Term):
    pos: Pos = _pos()


@dataclass(frozen=True, eq=False)
class Suc(Term):
    """Successor.  Numerals can be very deep, so the derived properties are
    computed eagerly and equality/hashing avoid recursion on the chain."""

    arg: Term
    pos: Pos = _pos()

    def __post_init__(self) -> None:
        d = self.__dict__
        d["free_vars"] = self.arg.free_vars
        d["is_value"] = self.arg.is_value
        d["inert"] = self.arg.inert
        inner = self.arg
        if isinstance(inner, Suc):
            d["numeral"] = None if inner.numeral is None else inner.numeral + 1
        else:
            d["numeral"] = 1 if isinstance(inner, Zero) else None

    def __eq__(self, other: object) -> bool:
        a, b = self, other
        while isinstance(a, Suc) and isinstance(b, Suc):
            if a.numeral is not None and b.numeral is not None:
                return a.numeral == b.numeral
            a, b = a.arg, b.arg
        if isinstance(a, Suc) or isinstance(b, Suc):
            return False
        return a == b

    def __hash__(self) -> int:
        depth, t = 0, self
        while isinstance(t, Suc):
            depth, t = depth + 1, t.arg
        return hash(("Suc", depth, t))

    def __repr__(self) -> str:
        depth, t = 0, self
        while isinstance(t, Suc):
            depth, t = depth + 1, t.arg
        return f"Suc^{depth}({t!r})" if depth > 1 else f"Suc({t!r})"


@dataclass(frozen=True)
class RecNat(Term):
    """``rec_N(base, x.y.step, arg)``: x is the predecessor, y the recursive result."""

    base: Term
    x: str
    y: str
    step: Term
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Lam(Term):
    var: str
    body: Term
    ann: Optional[Type] = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Proj(Term):
    index: int
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Inj(Term):
    index: int
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Case(Term):
    arg: Term
    var1: str
    branch1: Term
    var2: str
    branch2: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class DelayT(Term):
    body: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Adv(Term):
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class BoxT(Term):
    body: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Unbox(Term):
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Now(Term):
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Wait(Term):
    head: Term
    tail: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class RecUntil(Term):
    """``rec_U(x.now_case, x.y.z.wait_case, arg)``; z stands for the delayed recursive result."""

    now_var: str
    now_case: Term
    wait_var: str
    tail_var: str
    rec_var: str
    wait_case: Term
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class FixT(Term):
    var: str
    body: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Into(Term):
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Out(Term):
    arg: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Loc(Term):
    """Heap location; only produced by the machine."""

    loc: Location
    pos: Pos = _pos()


@dataclass(frozen=True)
class Ann(Term):
    """Type ascription.  Guides the checker; evaluation ignores it."""

    arg: Term
    type: Type
    pos: Pos = _pos()
    # name of the top-level declaration this node stands for, if any
    glob: Optional[str] = field(default=None, compare=False)


_LEAVES = (Var, UnitVal, Zero, Loc)
_EMPTY: frozenset[str] = frozenset()


def _free_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset([name])
        case UnitVal() | Zero() | Loc(_):
            return _EMPTY
        case Lam(x, body):
            return body.free_vars - {x}
        case FixT(x, body):
            return body.free_vars - {x}
        case Case(arg, x1, b1, x2, b2):
            return arg.free_vars | (b1.free_vars - {x1}) | (b2.free_vars - {x2})
        case RecNat(base, x, y, step, arg):
            return base.free_vars | arg.free_vars | (step.free_vars - {x, y})
        case RecUntil(x, s, x2, y, z, w, arg):
            return (s.free_vars - {x}) | (w.free_vars - {x2, y, z}) | arg.free_vars
    out = _EMPTY
    for c in children(t):
        out = out | c.free_vars
    return out


def _is_value(t: Term) -> bool:
    match t:
        case UnitVal() | Zero() | Lam() | BoxT() | DelayT() | FixT() | Loc():
            return True
        case Suc(a) | Into(a) | Now(a) | Inj(_, a):
            return a.is_value
        case Pair(a, b) | Wait(a, b):
            return a.is_value and b.is_value
    return False


def _inert(t: Term) -> bool:
    match t:
        case UnitVal() | Zero() | Lam() | BoxT() | FixT() | Loc():
            return True
        case Suc(a) | Into(a) | Now(a) | Inj(_, a):
            return a.inert
        case Pair(a, b) | Wait(a, b):
            return a.inert and b.inert
    return False


def is_value(t: Term) -> bool:
    return t.is_value


def children(t: Term) -> tuple[Term, ...]:
    match t:
        case Var() | UnitVal() | Zero() | Loc():
            return ()
        case Suc(a) | Proj(_, a) | Inj(_, a) | DelayT(a) | Adv(a) | BoxT(a) | Unbox(a) | Now(a) | Into(a) | Out(a):
            return (a,)
        case Lam(_, body) | FixT(_, body):
            return (body,)
        case Ann(a, _):
            return (a,)
        case App(a, b) | Pair(a, b) | Wait(a, b):
            return (a, b)
        case Case(a, _, b1, _, b2):
            return (a, b1, b2)
        case RecNat(base, _, _, step, arg):
            return (base, step, arg)
        case RecUntil(_, s, _, _, _, w, arg):
            return (s, w, arg)
    raise TypeError(f"not a core term: {t!r}")


def map_children(t: Term, f) -> Term:
    """Rebuild ``t`` with ``f`` applied to every immediate subterm (binders untouched)."""
    match t:
        case Var() | UnitVal() | Zero() | Loc():
            return t
        case Suc(a):
            return Suc(f(a), pos=t.pos)
        case Proj(i, a):
            return Proj(i, f(a), pos=t.pos)
        case Inj(i, a):
            return Inj(i, f(a), pos=t.pos)
        case DelayT(a) | Adv(a) | BoxT(a) | Unbox(a) | Now(a) | Into(a) | Out(a):
            return type(t)(f(a), pos=t.pos)
        case Lam(x, body, ann):
            return Lam(x, f(body), ann, pos=t.pos)
        case FixT(x, body):
            return FixT(x, f(body), pos=t.pos)
        case Ann(a, ty):
            return Ann(f(a), ty, pos=t.pos, glob=t.glob)
        case App(a, b) | Pair(a, b) | Wait(a, b):
            return type(t)(f(a), f(b), pos=t.pos)
        case Case(a, x1, b1, x2, b2):
            return Case(f(a), x1, f(b1), x2, f(b2), pos=t.pos)
        case RecNat(base, x, y, step, arg):
            return RecNat(f(base), x, y, f(step), f(arg), pos=t.pos)
        case RecUntil(x, s, x2, y, z, w, arg):
            return RecUntil(x, f(s), x2, y, z, f(w), f(arg), pos=t.pos)
    raise TypeError(f"not a core term: {t!r}")


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, Suc) and u.numeral is not None:
            continue
        stack.extend(children(u))


def locations(t: Term) -> set[Location]:
    return {u.loc for u in subterms(t) if isinstance(u, Loc)}


# numerals share one growing chain; terms are immutable, so sharing is safe
_NUMERALS: list[Term] = []
_NUMERAL_CACHE_LIMIT = 1 << 16


def numeral(n: int) -> Term:
    if not _NUMERALS:
        _NUMERALS.append(Zero())
    while len(_NUMERALS) <= min(n, _NUMERAL_CACHE_LIMIT):
        _NUMERALS.append(Suc(_NUMERALS[-1]))
    if n < len(_NUMERALS):
        return _NUMERALS[n]
    t = _NUMERALS[-1]
    for _ in range(n - len(_NUMERALS) + 1):
        t = Suc(t)
    return t


def nat_value(t: Term) -> Optional[int]:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Suc):
        return t.numeral
    return None


# ---------------------------------------------------------------------------
# Substitution

def fresh_name(base: str, avoid) -> str:
    """``base`` itself if unused, else ``base_N`` for the first free N."""
    if base not in avoid:
        return base
    for i in itertools.count(1):
        cand = f"{base}_{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def substitute(body: Term, var: str, replacement: Term) -> Term:
    return substitute_many(body, {var: replacement})


def substitute_many(body: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution."""
    if not mapping or body.free_vars.isdisjoint(mapping):
        return body
    match body:
        case Var(name):
            return mapping[name]
        case Lam(x, b, ann):
            (x,), b = _under_binders((x,), b, mapping)
            return Lam(x, b, ann, pos=body.pos)
        case FixT(x, b):
            (x,), b = _under_binders((x,), b, mapping)
            return FixT(x, b, pos=body.pos)
        case Case(a, x1, b1, x2, b2):
            (x1,), b1 = _under_binders((x1,), b1, mapping)
            (x2,), b2 = _under_binders((x2,), b2, mapping)
            return Case(substitute_many(a, mapping), x1, b1, x2, b2, pos=body.pos)
        case RecNat(base, x, y, step, arg):
            (x, y), step = _under_binders((x, y), step, mapping)
            return RecNat(substitute_many(base, mapping), x, y, step, substitute_many(arg, mapping), pos=body.pos)
        case RecUntil(x, s, x2, y, z, w, arg):
            (x,), s = _under_binders((x,), s, mapping)
            (x2, y, z), w = _under_binders((x2, y, z), w, mapping)
            return RecUntil(x, s, x2, y, z, w, substitute_many(arg, mapping), pos=body.pos)
    return map_children(body, lambda c: substitute_many(c, mapping))


def _under_binders(binders: tuple[str, ...], body: Term, mapping: Mapping[str, Term]):
    inner = {k: v for k, v in mapping.items() if k not in binders and k in body.free_vars}
    if not inner:
        return binders, body
    danger = frozenset().union(*(v.free_vars for v in inner.values()))
    renamed = list(binders)
    renaming: dict[str, Term] = {}
    for i, b in enumerate(binders):
        if b in danger:
            nb = fresh_name(b, danger | body.free_vars | set(binders) | set(inner))
            renamed[i] = nb
            renaming[b] = Var(nb)
    if renaming:
        body = substitute_many(body, renaming)
    return tuple(renamed), substitute_many(body, inner)


def alpha_equal(a: Term, b: Term) -> bool:
    return _alpha(a, b, {}, {})


def _alpha(a: Term, b: Term, ea: dict, eb: dict) -> bool:
    if type(a) is not type(b):
        return False
    match a:
        case Var(n):
            return ea.get(n, ("free", n)) == eb.get(b.name, ("free", b.name))
        case Suc():
            return a == b if not (a.free_vars or b.free_vars) else _alpha(a.arg, b.arg, ea, eb)
        case Lam(x, body, ann):
            return ann == b.ann and _bind_eq([(x, b.var)], body, b.body, ea, eb)
        case FixT(x, body):
            return _bind_eq([(x, b.var)], body, b.body, ea, eb)
        case Case(arg, x1, b1, x2, b2):
            return (
                _alpha(arg, b.arg, ea, eb)
                and _bind_eq([(x1, b.var1)], b1, b.branch1, ea, eb)
                and _bind_eq([(x2, b.var2)], b2, b.branch2, ea, eb)
            )
        case RecNat(base, x, y, step, arg):
            return (
                _alpha(base, b.base, ea, eb)
                and _alpha(arg, b.arg, ea, eb)
                and _bind_eq([(x, b.x), (y, b.y)], step, b.step, ea, eb)
            )
        case RecUntil(x, s, x2, y, z, w, arg):
            return (
                _alpha(arg, b.arg, ea, eb)
                and _bind_eq([(x, b.now_var)], s, b.now_case, ea, eb)
                and _bind_eq([(x2, b.wait_var), (y, b.tail_var), (z, b.rec_var)], w, b.wait_case, ea, eb)
            )
        case Proj(i, _) | Inj(i, _):
            if i != b.index:
                return False
        case Loc(l):
            return l == b.loc
        case Ann(_, ty):
            if ty != b.type:
                return False
    ca, cb = children(a), children(b)
    return len(ca) == len(cb) and all(_alpha(x, y, ea, eb) for x, y in zip(ca, cb))


def _bind_eq(pairs, body_a, body_b, ea, eb) -> bool:
    ea, eb = dict(ea), dict(eb)
    for x, y in pairs:
        key = ("bound", len(ea), len(eb), x, y)
        ea[x] = key
        eb[y] = key
    return _alpha(body_a, body_b, ea, eb)


# ---------------------------------------------------------------------------
# Typing contexts


@dataclass(frozen=True)
class VarBind:
    name: str
    type: Type


@dataclass(frozen=True)
class LockTok:
    pass


@dataclass(frozen=True)
class TickTok:
    mod: Mod


Entry = Union[VarBind, LockTok, TickTok]
Context = tuple[Entry, ...]
LOCK = LockTok()


# ---------------------------------------------------------------------------
# Heaps and stores


@dataclass(frozen=True)
class Heap:
    namespace: int
    bindings: Mapping[Location, Term] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.bindings)

    def __contains__(self, loc: Location) -> bool:
        return loc in self.bindings

    # every index below ``_free`` is known to be bound; a hint, not part of the value
    _free: int = field(default=0, compare=False, repr=False)

    def alloc(self) -> Location:
        i = self._free
        while Location(self.namespace, i) in self.bindings:
            i += 1
        return Location(self.namespace, i)

    def extend(self, loc: Location, t: Term) -> "Heap":
        new = dict(self.bindings)
        new[loc] = t
        free = self._free
        while Location(self.namespace, free) in new:
            free += 1
        return Heap(self.namespace, new, free)

    def read(self, loc: Location) -> Term:
        try:
            return self.bindings[loc]
        except KeyError:
            raise EvalError(ErrorKind.DANGLING_LOCATION, f"location {loc} is not in heap {self.namespace}") from None

    def well_scoped(self) -> bool:
        return all(l.namespace == self.namespace for l in self.bindings)


class Store:
    pass


@dataclass(frozen=True)
class NullStore(Store):
    pass


@dataclass(frozen=True)
class SingleHeap(Store):
    heap: Heap


@dataclass(frozen=True)
class TickedStore(Store):
    now: Heap
    later: Heap

    def __post_init__(self) -> None:
        if self.now.namespace == self.later.namespace:
            raise ValueError("the two heaps of a ticked store need distinct namespaces")


NULL = NullStore()


def rightmost(s: Store) -> Heap:
    match s:
        case SingleHeap(h):
            return h
        case TickedStore(_, later):
            return later
    raise EvalError(ErrorKind.NULL_STORE_ALLOC, "the null store has no heap")


def alloc(s: Store) -> Location:
    return rightmost(s).alloc()


def store_write(s: Store, loc: Location, t: Term) -> Store:
    match s:
        case SingleHeap(h):
            return SingleHeap(h.extend(loc, t))
        case TickedStore(now, later):
            return TickedStore(now, later.extend(loc, t))
    raise EvalError(ErrorKind.NULL_STORE_ALLOC, "cannot write to the null store")


def store_read(heap: Heap, loc: Location) -> Term:
    return heap.read(loc)


def gc_store(s: Store) -> Store:
    if isinstance(s, TickedStore):
        return SingleHeap(s.later)
    return s


def heap_extends(a: Heap, b: Heap) -> bool:
    if a.namespace != b.namespace:
        return False
    bb = b.bindings
    return all(k in bb and bb[k] == v for k, v in a.bindings.items())


def store_extends(s: Store, s2: Store) -> bool:
    match s, s2:
        case NullStore(), NullStore():
            return True
        case SingleHeap(a), SingleHeap(b):
            return heap_extends(a, b)
        case SingleHeap(a), TickedStore(_, later):
            return heap_extends(a, later)
        case TickedStore(n, l), TickedStore(n2, l2):
            return heap_extends(n, n2) and heap_extends(l, l2)
    return False
