"""Translation of surface sugar into core terms, and program elaboration."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from lratt.core import (
    Adv,
    Ann,
    App,
    Case,
    DelayT,
    FixT,
    Inj,
    Into,
    Lam,
    Pair,
    Proj,
    RecNat,
    RecUntil,
    Suc,
    Term,
    Type,
    Unbox,
    Var,
    children,
    fresh_name,
    map_children,
    subterms,
    substitute_many,
)
from lratt.errors import DesugarError
from lratt.surface.syntax import Cons, Let, MultiLam, MutualFix, SourceProgram, Sugar, UrecAs


def desugar(t: Term) -> Term:
    match t:
        case Cons(head, tail):
            return Into(Pair(desugar(head), desugar(tail), pos=t.pos), pos=t.pos)
        case Let(x, ann, bound, body):
            # let x = t in u  ~>  case inl t of { inl x -> u ; inr x -> u }
            b = desugar(bound)
            if ann is not None:
                b = Ann(b, ann, pos=bound.pos)
            u = desugar(body)
            return Case(Inj(1, b, pos=t.pos), x, u, x, u, pos=t.pos)
        case MultiLam(binders, body):
            out = desugar(body)
            for x, ann in reversed(binders):
                out = Lam(x, out, ann, pos=t.pos)
            return out
        case UrecAs():
            return _desugar_urec(t)
        case MutualFix():
            return _desugar_mutual_fix(t)
        case Suc() if t.numeral is not None:
            return t
    return map_children(t, desugar)


def _desugar_urec(t: UrecAs) -> Term:
    wait_case = desugar(t.wait_case)
    now_case = desugar(t.now_case)
    if t.self_name in now_case.free_vars:
        raise _misuse(t, now_case, t.self_name, "the now clause cannot recurse")
    z = fresh_name("r", wait_case.free_vars | {t.wait_var, t.tail_var})

    def rewrite(u: Term, bound: frozenset[str]) -> Optional[Term]:
        if isinstance(u, App) and u.fn == Var(t.self_name) and u.arg == Var(t.tail_var):
            if t.tail_var in bound:
                raise DesugarError("recursive call on a shadowed tail variable", *(u.pos or (0, 0)))
            return Var(z, pos=u.pos)
        if isinstance(u, Var) and u.name == t.self_name:
            raise DesugarError(
                f"{t.self_name} may only be applied to the tail {t.tail_var}", *(u.pos or (0, 0))
            )
        return None

    if t.self_name not in (t.wait_var, t.tail_var):
        wait_case = rewrite_free(wait_case, t.self_name, rewrite)
    return RecUntil(t.now_var, now_case, t.wait_var, t.tail_var, z, wait_case, desugar(t.arg), pos=t.pos)


def _desugar_mutual_fix(t: MutualFix) -> Term:
    body = desugar(t.body)
    f, g = t.names
    r = fresh_name(f"{f}_{g}", body.free_vars | {f, g})

    def component(name: str) -> int:
        return 1 if name == f else 2

    def rewrite(u: Term, bound: frozenset[str]) -> Optional[Term]:
        # adv (unbox f)  ~>  fst (adv (unbox r))
        if isinstance(u, Adv) and isinstance(u.arg, Unbox) and isinstance(u.arg.arg, Var):
            name = u.arg.arg.name
            if name in (f, g) and name not in bound:
                return Proj(component(name), Adv(Unbox(Var(r)), pos=u.pos), pos=u.pos)
        # unbox f  ~>  delay (fst (adv (unbox r))), the later-lifted projection
        if isinstance(u, Unbox) and isinstance(u.arg, Var) and u.arg.name in (f, g):
            if u.arg.name not in bound:
                proj = Proj(component(u.arg.name), Adv(Unbox(Var(r)), pos=u.pos), pos=u.pos)
                return DelayT(proj, pos=u.pos)
        if isinstance(u, Var) and u.name in (f, g) and u.name not in bound:
            raise DesugarError(
                f"{u.name} may only be used as 'unbox {u.name}' or 'adv (unbox {u.name})'", *(u.pos or (0, 0))
            )
        return None

    for name in (f, g):
        body = rewrite_free(body, name, rewrite)
    return FixT(r, body, pos=t.pos)


def _misuse(t: Term, body: Term, name: str, msg: str) -> DesugarError:
    for u in subterms(body):
        if isinstance(u, Var) and u.name == name and u.pos:
            return DesugarError(msg, *u.pos)
    return DesugarError(msg, *(t.pos or (0, 0)))


def rewrite_free(t: Term, name: str, rewrite: Callable[[Term, frozenset[str]], Optional[Term]],
                 bound: frozenset[str] = frozenset()) -> Term:
    """Rewrite subterms where ``name`` is free; stops under binders that shadow it."""
    if name not in t.free_vars:
        return t
    out = rewrite(t, bound)
    if out is not None:
        return out
    binders = _child_binders(t)
    kids = iter(binders)

    def go(child: Term) -> Term:
        names = next(kids)
        if name in names:
            return child
        return rewrite_free(child, name, rewrite, bound | frozenset(names))

    return map_children(t, go)


def _child_binders(t: Term) -> list[tuple[str, ...]]:
    """Names bound in each immediate subterm, in ``map_children`` order."""
    match t:
        case Lam(x, _) | FixT(x, _):
            return [(x,)]
        case Case(_, x1, _, x2, _):
            return [(), (x1,), (x2,)]
        case RecNat(_, x, y, _, _):
            return [(), (x, y), ()]
        case RecUntil(x, _, x2, y, z, _, _):
            return [(x,), (x2, y, z), ()]
    return [()] * 3


@dataclass(frozen=True)
class ElabDecl:
    """A declaration after desugaring.  ``term`` has earlier declarations inlined."""

    name: str
    type: Type
    body: Term
    term: Term
    entry: bool
    pos: Optional[tuple[int, int]] = None
    locked: bool = False


def elaborate(program: SourceProgram) -> list[ElabDecl]:
    out: list[ElabDecl] = []
    env: dict[str, Term] = {}
    for d in program.decls:
        body = desugar(d.body)
        closed = substitute_many(body, env)
        out.append(ElabDecl(d.name, d.type, body, closed, d.entry, d.pos, d.locked))
        env[d.name] = Ann(closed, d.type, pos=d.pos, glob=None if d.locked else d.name)
    return out


def has_sugar(t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Sugar):
            return True
        if isinstance(u, Suc) and u.numeral is not None:
            continue
        stack.extend(children(u))
    return False
