"""Big-step evaluation of terms against a store.

``evaluate(t, sigma)`` returns ``(v, sigma')`` or raises :class:`EvalError`.
Evaluation is substitution based and call-by-value; ``box`` and ``delay`` suspend
their bodies.  A fuel budget bounds the number of derivation nodes so that
divergence shows up as ``FuelExhausted`` instead of a hang.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from lratt.core import (
    NULL,
    Adv,
    Ann,
    App,
    BoxT,
    Case,
    DelayT,
    FixT,
    Heap,
    Inj,
    Into,
    Lam,
    Loc,
    NullStore,
    Now,
    Out,
    Pair,
    Proj,
    RecNat,
    RecUntil,
    SingleHeap,
    Store,
    Suc,
    Term,
    TickedStore,
    Unbox,
    Var,
    Wait,
    Zero,
    alloc,
    map_children,
    substitute,
    substitute_many,
)
from lratt.errors import ErrorKind, EvalError

DEFAULT_FUEL = 10**7

# Evaluating long-lived programs nests deeply (one frame per derivation level).
sys.setrecursionlimit(max(sys.getrecursionlimit(), 200_000))


@dataclass
class Derivation:
    """One node of an evaluation derivation: ``term`` in ``store`` evaluates to ``value``."""

    rule: str
    term: Term
    store: Store
    value: Optional[Term] = None
    result_store: Optional[Store] = None
    premises: list["Derivation"] = field(default_factory=list)

    def shape(self) -> tuple:
        """Rule names and conclusions, for node-by-node comparison."""
        return (self.rule, self.term, self.value, tuple(p.shape() for p in self.premises))

    def lines(self, depth: int = 0) -> list[str]:
        """The tree as indented text, one judgement per line, premises below their conclusion."""
        from lratt.surface.pretty import format_store, format_term

        judgement = (
            f"<{format_term(self.term)}, {format_store(self.store)}> => "
            f"<{format_term(self.value)}, {format_store(self.result_store)}>"
        )
        out = [f"{'  ' * depth}[{self.rule}] {judgement}"]
        for p in self.premises:
            out.extend(p.lines(depth + 1))
        return out


def erase(t: Term) -> Term:
    """Drop type ascriptions; they carry no runtime meaning."""
    if isinstance(t, Ann):
        return erase(t.arg)
    if isinstance(t, Suc) and t.numeral is not None:
        return t
    return map_children(t, erase)


class Evaluator:
    """Evaluates terms with a fuel budget; set ``record`` to build derivation trees."""

    def __init__(self, fuel: int = DEFAULT_FUEL, record: bool = False):
        self.fuel = fuel
        self.used = 0
        self.record = record
        self._stack: list[Derivation] = []
        self.root: Optional[Derivation] = None
        self._dispatch: dict[type, Callable] = {
            Var: self._var,
            Pair: self._pair,
            Proj: self._proj,
            Inj: self._inj,
            Case: self._case,
            App: self._app,
            DelayT: self._delay,
            Adv: self._adv,
            Unbox: self._unbox,
            Suc: self._suc,
            RecNat: self._recnat,
            Now: self._now,
            Wait: self._wait,
            RecUntil: self._recuntil,
            Into: self._into,
            Out: self._out,
            Ann: self._ann,
        }

    def eval(self, t: Term, store: Store) -> tuple[Term, Store]:
        self.used += 1
        if self.used > self.fuel:
            raise EvalError(ErrorKind.FUEL_EXHAUSTED, f"more than {self.fuel} derivation nodes")
        if t.inert:
            if self.record:
                self._attach(Derivation("val", t, store, t, store))
            return t, store
        handler = self._dispatch.get(type(t))
        if handler is None:
            raise EvalError(ErrorKind.OPEN_TERM, f"no rule for {type(t).__name__}")
        if not self.record:
            return handler(t, store)
        node = Derivation("?", t, store)
        self._attach(node)
        self._stack.append(node)
        try:
            v, s = handler(t, store)
        finally:
            self._stack.pop()
        node.value, node.result_store = v, s
        return v, s

    def _attach(self, node: Derivation) -> None:
        if self._stack:
            self._stack[-1].premises.append(node)
        else:
            self.root = node

    def _rule(self, name: str) -> None:
        if self.record:
            self._stack[-1].rule = name

    # lambda calculus

    def _var(self, t: Var, s: Store):
        raise EvalError(ErrorKind.OPEN_TERM, f"free variable {t.name}")

    def _ann(self, t: Ann, s: Store):
        self._rule("ann")
        return self.eval(t.arg, s)

    def _pair(self, t: Pair, s: Store):
        self._rule("pair")
        v1, s = self.eval(t.left, s)
        v2, s = self.eval(t.right, s)
        return Pair(v1, v2), s

    def _proj(self, t: Proj, s: Store):
        self._rule("proj")
        v, s = self.eval(t.arg, s)
        if not isinstance(v, Pair):
            raise EvalError(ErrorKind.NOT_A_PAIR, f"projection from {v}")
        return (v.left if t.index == 1 else v.right), s

    def _inj(self, t: Inj, s: Store):
        self._rule("inj")
        v, s = self.eval(t.arg, s)
        return Inj(t.index, v), s

    def _case(self, t: Case, s: Store):
        self._rule("case")
        v, s = self.eval(t.arg, s)
        if not isinstance(v, Inj):
            raise EvalError(ErrorKind.NOT_A_SUM, f"case on {v}")
        if v.index == 1:
            return self.eval(substitute(t.branch1, t.var1, v.arg), s)
        return self.eval(substitute(t.branch2, t.var2, v.arg), s)

    def _app(self, t: App, s: Store):
        self._rule("app")
        f, s = self.eval(t.fn, s)
        if not isinstance(f, Lam):
            raise EvalError(ErrorKind.NOT_A_FUNCTION, f"applying {f}")
        a, s = self.eval(t.arg, s)
        return self.eval(substitute(f.body, f.var, a), s)

    # modalities

    def _delay(self, t: DelayT, s: Store):
        self._rule("delay")
        if isinstance(s, NullStore):
            raise EvalError(ErrorKind.NULL_STORE_ALLOC, "delay under the null store")
        loc = alloc(s)
        return Loc(loc), _write(s, loc, t.body)

    def _adv(self, t: Adv, s: Store):
        self._rule("adv")
        if not isinstance(s, TickedStore):
            raise EvalError(ErrorKind.ADV_WITHOUT_TICK, "adv needs a store of the form now-heap tick later-heap")
        v, now = self.eval(t.arg, SingleHeap(s.now))
        if not isinstance(v, Loc):
            raise EvalError(ErrorKind.NOT_A_LOCATION, f"adv of {v}")
        heap = now.heap
        return self.eval(heap.read(v.loc), TickedStore(heap, s.later))

    def _unbox(self, t: Unbox, s: Store):
        v, _ = self.eval(t.arg, NULL)
        if isinstance(s, NullStore):
            raise EvalError(ErrorKind.NULL_STORE_READ, "unbox under the null store")
        if isinstance(v, BoxT):
            self._rule("unbox-box")
            return self.eval(v.body, s)
        if isinstance(v, FixT):
            self._rule("unbox-fix")
            unfolding = BoxT(DelayT(Unbox(v)))
            return self.eval(substitute(v.body, v.var, unfolding), s)
        raise EvalError(ErrorKind.NOT_A_BOX, f"unbox of {v}")

    # naturals

    def _suc(self, t: Suc, s: Store):
        self._rule("suc")
        v, s = self.eval(t.arg, s)
        return Suc(v), s

    def _recnat(self, t: RecNat, s: Store):
        n, s = self.eval(t.arg, s)
        if self.record:
            return self._recnat_step(t, n, s)
        # Iterative form of the zero/successor rules: same evaluation order,
        # without one Python frame per unfolding.
        preds: list[Term] = []
        while isinstance(n, Suc):
            preds.append(n.arg)
            n = n.arg
        if not isinstance(n, Zero):
            raise EvalError(ErrorKind.NOT_A_NAT, f"nrec on {n}")
        acc, s = self.eval(t.base, s)
        for pred in reversed(preds):
            self.used += 2  # the recursive conclusion and its v => v premise
            acc, s = self.eval(substitute_many(t.step, {t.x: pred, t.y: acc}), s)
        return acc, s

    def _recnat_step(self, t: RecNat, n: Term, s: Store):
        if isinstance(n, Zero):
            self._rule("nrec-zero")
            return self.eval(t.base, s)
        if isinstance(n, Suc):
            self._rule("nrec-suc")
            acc, s = self.eval(RecNat(t.base, t.x, t.y, t.step, n.arg), s)
            return self.eval(substitute_many(t.step, {t.x: n.arg, t.y: acc}), s)
        raise EvalError(ErrorKind.NOT_A_NAT, f"nrec on {n}")

    # until types

    def _now(self, t: Now, s: Store):
        self._rule("now")
        v, s = self.eval(t.arg, s)
        return Now(v), s

    def _wait(self, t: Wait, s: Store):
        self._rule("wait")
        v1, s = self.eval(t.head, s)
        v2, s = self.eval(t.tail, s)
        return Wait(v1, v2), s

    def _recuntil(self, t: RecUntil, s: Store):
        u, s = self.eval(t.arg, s)
        if isinstance(u, Now):
            self._rule("urec-now")
            return self.eval(substitute(t.now_case, t.now_var, u.arg), s)
        if isinstance(u, Wait):
            self._rule("urec-wait")
            if isinstance(s, NullStore):
                raise EvalError(ErrorKind.NULL_STORE_ALLOC, "until recursion under the null store")
            loc = alloc(s)
            suspended = RecUntil(t.now_var, t.now_case, t.wait_var, t.tail_var, t.rec_var, t.wait_case, Adv(u.tail))
            s = _write(s, loc, suspended)
            body = substitute_many(t.wait_case, {t.wait_var: u.head, t.tail_var: u.tail, t.rec_var: Loc(loc)})
            return self.eval(body, s)
        raise EvalError(ErrorKind.NOT_AN_UNTIL_VALUE, f"until recursion on {u}")

    # guarded recursive types

    def _into(self, t: Into, s: Store):
        self._rule("into")
        v, s = self.eval(t.arg, s)
        return Into(v), s

    def _out(self, t: Out, s: Store):
        self._rule("out")
        v, s = self.eval(t.arg, s)
        if not isinstance(v, Into):
            raise EvalError(ErrorKind.NOT_AN_INTO, f"out of {v}")
        return v.arg, s


def _write(s: Store, loc, t: Term) -> Store:
    if isinstance(s, SingleHeap):
        return SingleHeap(s.heap.extend(loc, t))
    return TickedStore(s.now, s.later.extend(loc, t))


def evaluate(t: Term, store: Store, fuel: int = DEFAULT_FUEL) -> tuple[Term, Store]:
    return Evaluator(fuel).eval(t, store)


def derive(t: Term, store: Store, fuel: int = DEFAULT_FUEL) -> tuple[Term, Store, Derivation]:
    ev = Evaluator(fuel, record=True)
    v, s = ev.eval(t, store)
    assert ev.root is not None
    return v, s, ev.root


def empty_ticked(ns: int = 0) -> TickedStore:
    return TickedStore(Heap(ns), Heap(ns + 1))
