"""Bidirectional type checking with Fitch-style contexts.

Introduction forms (``fun``, ``delay``, ``box``, ``fix``, ``into``, ``now``,
``wait``, injections) are checked against a known type; elimination forms
synthesize.  Contexts are kept well formed: binders that would shadow an
existing name are renamed first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from lratt.core import (
    LOCK,
    Adv,
    Ann,
    App,
    Box,
    BoxT,
    Case,
    Context,
    Delay,
    DelayT,
    Fix,
    FixT,
    Fun,
    Inj,
    Into,
    Lam,
    Later,
    Loc,
    LockTok,
    Mod,
    Nat,
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
    TickTok,
    Type,
    Unbox,
    Unit,
    UnitVal,
    Until,
    Var,
    VarBind,
    Wait,
    Zero,
    fresh_name,
    is_limit,
    is_stable,
    mod_leq,
    modal,
    substitute,
    unfold_fix_type,
)
from lratt.errors import TypeCheckError, TypeErrorKind as K
from lratt.surface.desugar import ElabDecl, elaborate
from lratt.surface.syntax import SourceProgram


def wf_context(ctx: Iterable) -> bool:
    """Context formation: fresh names, one lock, at most one tick and only after the lock."""
    names: set[str] = set()
    seen_lock = seen_tick = False
    for e in ctx:
        if isinstance(e, VarBind):
            if e.name in names:
                return False
            names.add(e.name)
        elif isinstance(e, LockTok):
            if seen_lock or seen_tick:
                return False
            seen_lock = True
        elif isinstance(e, TickTok):
            if not seen_lock or seen_tick:
                return False
            seen_tick = True
        else:
            return False
    return True


@dataclass(frozen=True)
class _Ctx:
    entries: Context = ()
    hidden: frozenset[str] = frozenset()

    def names(self) -> set[str]:
        return {e.name for e in self.entries if isinstance(e, VarBind)}

    def has_lock(self) -> bool:
        return any(isinstance(e, LockTok) for e in self.entries)

    def has_tick(self) -> bool:
        return any(isinstance(e, TickTok) for e in self.entries)

    def bind(self, name: str, ty: Type) -> "_Ctx":
        return _Ctx(self.entries + (VarBind(name, ty),), self.hidden - {name})

    def push(self, token) -> "_Ctx":
        return _Ctx(self.entries + (token,), self.hidden)

    def before_last(self, kind) -> Optional[tuple["_Ctx", object]]:
        """The prefix before the last token of ``kind``; dropped names become hidden."""
        for i in range(len(self.entries) - 1, -1, -1):
            if isinstance(self.entries[i], kind):
                dropped = {e.name for e in self.entries[i + 1 :] if isinstance(e, VarBind)}
                prefix = self.entries[:i]
                live = {e.name for e in prefix if isinstance(e, VarBind)}
                return _Ctx(prefix, (self.hidden | dropped) - live), self.entries[i]
        return None


class Checker:
    def check(self, ctx: _Ctx, t: Term, a: Type) -> None:
        try:
            self._check(ctx, t, a)
        except TypeCheckError as e:
            if e.pos is None:
                e.pos = t.pos
            raise

    def infer(self, ctx: _Ctx, t: Term) -> Type:
        try:
            return self._infer(ctx, t)
        except TypeCheckError as e:
            if e.pos is None:
                e.pos = t.pos
            raise

    # checking mode

    def _check(self, ctx: _Ctx, t: Term, a: Type) -> None:
        match t:
            case Lam(x, body, ann):
                if not isinstance(a, Fun):
                    raise _mismatch("lambda", a, None, "a lambda needs a function type")
                if ann is not None and ann != a.arg:
                    raise _mismatch("lambda", a.arg, ann, "annotation disagrees with the expected argument type")
                self._lambda_ok(ctx)
                x, body = self._fresh(ctx, x, body)
                self.check(ctx.bind(x, a.arg), body, a.res)
            case Pair(l, r):
                if not isinstance(a, Prod):
                    raise _mismatch("pair", a, None, "a pair needs a product type")
                self.check(ctx, l, a.left)
                self.check(ctx, r, a.right)
            case Inj(i, e):
                if not isinstance(a, Sum):
                    raise _mismatch("in", a, None, "an injection needs a sum type")
                self.check(ctx, e, a.left if i == 1 else a.right)
            case Case():
                self._case(ctx, t, a)
            case DelayT(body):
                if not isinstance(a, (Delay, Later)):
                    raise _mismatch("delay", a, None, "delay needs a Next or Later type")
                m = Mod.DELAY if isinstance(a, Delay) else Mod.LATER
                self.check(self._tick(ctx, m), body, a.body)
            case BoxT(body):
                if not isinstance(a, Box):
                    raise _mismatch("box", a, None, "box needs a Box type")
                self.check(self._lock(ctx, "box"), body, a.body)
            case FixT(x, body):
                if not isinstance(a, Box):
                    raise _mismatch("fix", a, None, "a fixed point has a Box type")
                x, body = self._fresh(ctx, x, body)
                inner = self._lock(ctx.bind(x, Box(Later(a.body))), "fix")
                self.check(inner, body, a.body)
            case Now(e):
                if not isinstance(a, Until):
                    raise _mismatch("now", a, None, "now needs an Until type")
                self.check(ctx, e, a.right)
            case Wait(h, tl):
                if not isinstance(a, Until):
                    raise _mismatch("wait", a, None, "wait needs an Until type")
                self.check(ctx, h, a.left)
                self.check(ctx, tl, Delay(a))
            case Into(e):
                if not isinstance(a, Fix):
                    raise _mismatch("into", a, None, "into needs a Fix type")
                self.check(ctx, e, unfold_fix_type(a))
            case RecNat():
                self._recnat(ctx, t, a)
            case RecUntil():
                self._recuntil(ctx, t, a)
            case App(fn, arg):
                try:
                    fty = self.infer(ctx, fn)
                except TypeCheckError as e:
                    if e.kind is not K.CANNOT_SYNTHESIZE:
                        raise
                    # the function does not synthesize: take the argument's type instead
                    self.check(ctx, fn, Fun(self.infer(ctx, arg), a))
                    return
                if not isinstance(fty, Fun):
                    raise _mismatch("app", None, fty, "applying a non-function")
                self.check(ctx, arg, fty.arg)
                if fty.res != a:
                    raise _mismatch("app", a, fty.res, "result type differs")
            case _:
                got = self.infer(ctx, t)
                if got != a:
                    raise _mismatch("conversion", a, got, f"expected {a}, got {got}")

    # synthesis mode

    def _infer(self, ctx: _Ctx, t: Term) -> Type:
        match t:
            case Var(name):
                return self._var(ctx, name)
            case UnitVal():
                return Unit()
            case Zero():
                return Nat()
            case Suc(e):
                if t.numeral is None:
                    self.check(ctx, e, Nat())
                return Nat()
            case Ann(e, ty, glob=g) if g is not None and not e.free_vars:
                # an earlier declaration, already checked in the empty context;
                # usable anywhere since  unbox (box e)  derives it under any lock
                return ty
            case Ann(e, ty):
                if ty.free_tvars:
                    raise _mismatch("annotation", None, ty, "annotations must be closed types")
                self.check(ctx, e, ty)
                return ty
            case App(fn, arg):
                fty = self.infer(ctx, fn)
                if not isinstance(fty, Fun):
                    raise _mismatch("app", None, fty, "applying a non-function")
                self.check(ctx, arg, fty.arg)
                return fty.res
            case Proj(i, e):
                ty = self.infer(ctx, e)
                if not isinstance(ty, Prod):
                    raise _mismatch("proj", None, ty, "projection from a non-product")
                return ty.left if i == 1 else ty.right
            case Pair(l, r):
                return Prod(self.infer(ctx, l), self.infer(ctx, r))
            case Lam(x, body, ann) if ann is not None:
                self._lambda_ok(ctx)
                x, body = self._fresh(ctx, x, body)
                return Fun(ann, self.infer(ctx.bind(x, ann), body))
            case BoxT(body):
                return Box(self.infer(self._lock(ctx, "box"), body))
            case Adv(e):
                split = ctx.before_last(TickTok)
                if split is None:
                    raise TypeCheckError(K.MISSING_TICK, "adv", "adv needs a tick in the context")
                before, tick = split
                ty = self.infer(before, e)
                if not isinstance(ty, (Delay, Later)):
                    raise _mismatch("adv", None, ty, "adv of a term without a Next or Later type")
                m = Mod.DELAY if isinstance(ty, Delay) else Mod.LATER
                if not (mod_leq(m, tick.mod) or is_limit(ty.body)):
                    raise TypeCheckError(
                        K.MODALITY_MISMATCH,
                        "adv",
                        f"cannot advance {ty} under a {tick.mod.value} tick: {ty.body} is not a limit type",
                        expected=modal(tick.mod, ty.body),
                        actual=ty,
                    )
                return ty.body
            case Unbox(e):
                before = self._before_lock(ctx, "unbox")
                ty = self.infer(before, e)
                if not isinstance(ty, Box):
                    raise _mismatch("unbox", None, ty, "unbox of a non-Box term")
                return ty.body
            case Out(e):
                ty = self.infer(ctx, e)
                if not isinstance(ty, Fix):
                    raise _mismatch("out", None, ty, "out of a non-Fix term")
                return unfold_fix_type(ty)
            case Case():
                return self._case(ctx, t, None)
            case RecNat():
                return self._recnat(ctx, t, None)
            case RecUntil():
                return self._recuntil(ctx, t, None)
            case Loc():
                raise TypeCheckError(K.CANNOT_SYNTHESIZE, "loc", "heap locations do not occur in programs")
        raise TypeCheckError(
            K.CANNOT_SYNTHESIZE, type(t).__name__.lower(), f"cannot synthesize a type for {t}; add an annotation"
        )

    # rules shared by both modes

    def _var(self, ctx: _Ctx, name: str) -> Type:
        for i in range(len(ctx.entries) - 1, -1, -1):
            e = ctx.entries[i]
            if isinstance(e, VarBind) and e.name == name:
                rest = ctx.entries[i + 1 :]
                if any(not isinstance(r, VarBind) for r in rest) and not is_stable(e.type):
                    raise TypeCheckError(
                        K.VARIABLE_BLOCKED_BY_TOKEN,
                        "var",
                        f"{name} : {e.type} is not stable and cannot be used across a tick or lock",
                        actual=e.type,
                    )
                return e.type
        if name in ctx.hidden:
            raise TypeCheckError(
                K.VARIABLE_BLOCKED_BY_TOKEN, "var", f"{name} is not accessible past the token that hides it"
            )
        raise TypeCheckError(K.UNBOUND_VARIABLE, "var", f"unbound variable {name}")

    def _case(self, ctx: _Ctx, t: Case, a: Optional[Type]) -> Type:
        try:
            sty = self.infer(ctx, t.arg)
        except TypeCheckError as e:
            if e.kind is not K.CANNOT_SYNTHESIZE or not isinstance(t.arg, Inj):
                raise
            # case inl e of ...  (the elaboration of let): both summands get e's type
            inner = self.infer(ctx, t.arg.arg)
            sty = Sum(inner, inner)
            self.check(ctx, t.arg, sty)
        if not isinstance(sty, Sum):
            raise _mismatch("case", None, sty, "case on a non-sum")
        x1, b1 = self._fresh(ctx, t.var1, t.branch1)
        if a is None:
            a = self.infer(ctx.bind(x1, sty.left), b1)
        else:
            self.check(ctx.bind(x1, sty.left), b1, a)
        same = t.var1 == t.var2 and t.branch1 == t.branch2 and sty.left == sty.right
        if not same:  # an identical judgement needs no second derivation
            x2, b2 = self._fresh(ctx, t.var2, t.branch2)
            self.check(ctx.bind(x2, sty.right), b2, a)
        return a

    def _recnat(self, ctx: _Ctx, t: RecNat, a: Optional[Type]) -> Type:
        self.check(ctx, t.arg, Nat())
        if a is None:
            a = self.infer(ctx, t.base)
        else:
            self.check(ctx, t.base, a)
        x, y, step = t.x, t.y, t.step
        avoid = ctx.names() | ctx.hidden
        if x == y:
            raise TypeCheckError(K.TYPE_MISMATCH, "nrec", "the two nrec binders must differ")
        x, step = _rename_if(x, step, avoid | {y})
        y, step = _rename_if(y, step, avoid | {x})
        self.check(ctx.bind(x, Nat()).bind(y, a), step, a)
        return a

    def _recuntil(self, ctx: _Ctx, t: RecUntil, c: Optional[Type]) -> Type:
        before = self._before_lock(ctx, "urec")
        uty = self.infer(ctx, t.arg)
        if not isinstance(uty, Until):
            raise _mismatch("urec", None, uty, "until recursion on a non-Until term")
        base = before.push(LOCK)
        avoid = base.names() | base.hidden
        x, s = _rename_if(t.now_var, t.now_case, avoid)
        if c is None:
            c = self.infer(base.bind(x, uty.right), s)
        else:
            self.check(base.bind(x, uty.right), s, c)
        if len({t.wait_var, t.tail_var, t.rec_var}) < 3:
            raise TypeCheckError(K.TYPE_MISMATCH, "urec", "the three urec binders must differ")
        x2, y, z, w = t.wait_var, t.tail_var, t.rec_var, t.wait_case
        x2, w = _rename_if(x2, w, avoid | {y, z})
        y, w = _rename_if(y, w, avoid | {x2, z})
        z, w = _rename_if(z, w, avoid | {x2, y})
        inner = base.bind(x2, uty.left).bind(y, Delay(uty)).bind(z, Delay(c))
        self.check(inner, w, c)
        return c

    # token discipline

    def _lambda_ok(self, ctx: _Ctx) -> None:
        if ctx.has_tick():
            raise TypeCheckError(K.LAMBDA_UNDER_TICK, "lambda", "lambdas cannot be formed after a tick")

    def _tick(self, ctx: _Ctx, m: Mod) -> _Ctx:
        if not ctx.has_lock():
            raise TypeCheckError(K.MISSING_LOCK, "delay", "a tick can only be added after a lock")
        if ctx.has_tick():
            raise TypeCheckError(K.DUPLICATE_TOKEN, "delay", "the context already has a tick")
        return ctx.push(TickTok(m))

    def _lock(self, ctx: _Ctx, rule: str) -> _Ctx:
        if ctx.has_lock():
            raise TypeCheckError(K.DUPLICATE_TOKEN, rule, "the context already has a lock")
        return ctx.push(LOCK)

    def _before_lock(self, ctx: _Ctx, rule: str) -> _Ctx:
        split = ctx.before_last(LockTok)
        if split is None:
            raise TypeCheckError(K.MISSING_LOCK, rule, f"{rule} needs a lock in the context")
        return split[0]

    def _fresh(self, ctx: _Ctx, x: str, body: Term) -> tuple[str, Term]:
        return _rename_if(x, body, ctx.names() | ctx.hidden)


def _rename_if(x: str, body: Term, avoid: set[str]) -> tuple[str, Term]:
    if x not in avoid:
        return x, body
    nx = fresh_name(x, avoid | body.free_vars)
    return nx, substitute(body, x, Var(nx))


def _mismatch(rule: str, expected, actual, msg: str) -> TypeCheckError:
    return TypeCheckError(K.TYPE_MISMATCH, rule, msg, expected=expected, actual=actual)


def _to_ctx(ctx: Iterable) -> _Ctx:
    entries = tuple(ctx)
    if not wf_context(entries):
        raise ValueError("ill-formed context")
    return _Ctx(entries)


def check(ctx: Iterable, t: Term, a: Type) -> None:
    """Raise :class:`TypeCheckError` unless ``ctx |- t : a``."""
    Checker().check(_to_ctx(ctx), t, a)


def infer(ctx: Iterable, t: Term) -> Type:
    return Checker().infer(_to_ctx(ctx), t)


def has_type(ctx: Iterable, t: Term, a: Type) -> bool:
    try:
        check(ctx, t, a)
    except TypeCheckError:
        return False
    return True


def check_decl(d: ElabDecl) -> ElabDecl:
    """Check a declaration in the empty context, or under a lone lock if it is marked ``locked``."""
    try:
        if d.type.free_tvars:
            raise TypeCheckError(K.TYPE_MISMATCH, "decl", "declared types must be closed", pos=d.pos)
        check((LOCK,) if d.locked else (), d.term, d.type)
    except TypeCheckError as e:
        e.decl = d.name
        raise
    return d


def check_program(program: SourceProgram) -> list[ElabDecl]:
    """Elaborate and check every declaration; the first failure is raised."""
    return [check_decl(d) for d in elaborate(program)]
