"""Reactive step machines: one external input is consumed per step.

The state carries the location ``l`` where the next input goes.  A step writes
``l |-> v :: l'`` into the current heap, seeds the fresh later heap with the
placeholder ``l' |-> ()`` so that evaluation cannot allocate ``l'``, and runs the
term.  ``l'`` is always index 0 of the later heap's namespace; the next step
overwrites the placeholder with the real input cell.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from lratt.core import (
    Adv,
    App,
    Heap,
    Inj,
    Into,
    Loc,
    Location,
    Now,
    Out,
    Pair,
    Term,
    TickedStore,
    Unbox,
    UnitVal,
    Wait,
    locations,
)
from lratt.errors import ErrorKind, EvalError, ShapeError
from lratt.evaluator import DEFAULT_FUEL, Evaluator, erase
from lratt.machine import Driver, StepRecord


@dataclass(frozen=True)
class ReactiveState:
    term: Optional[Term]  # None once an until or fair-switching run has halted
    heap: Heap
    input_loc: Location
    mode: Optional[int] = None

    @property
    def halted(self) -> bool:
        return self.term is None


def init_reactive(t: Term, kind: Driver) -> ReactiveState:
    heap = Heap(0)
    l0 = heap.alloc()
    term: Term = App(Unbox(erase(t)), Adv(Loc(l0)))
    if kind is Driver.FAIR:
        return ReactiveState(Out(term), heap, l0, 1)
    return ReactiveState(term, heap, l0)


def _eval_with_input(s: ReactiveState, value: Term, fuel: int, collect: bool) -> tuple[Term, Heap, Location]:
    if s.halted:
        raise ShapeError("the machine has already halted")
    if not value.is_value or value.free_vars or locations(value):
        raise EvalError(ErrorKind.BAD_INPUT, f"inputs must be closed, location-free values, not {value}")
    nxt = Location(s.heap.namespace + 1, 0)
    now = s.heap.extend(s.input_loc, Into(Pair(value, Loc(nxt))))
    later = Heap(nxt.namespace, {nxt: UnitVal()})
    v, store = Evaluator(fuel).eval(s.term, TickedStore(now, later))
    if not isinstance(store, TickedStore):
        raise ShapeError(f"a step ended in store {store}")
    if collect:
        heap = store.later
    else:
        merged = dict(store.now.bindings)
        merged.update(store.later.bindings)
        heap = Heap(store.later.namespace, merged)
    return v, heap, nxt


def react_step_stream(s: ReactiveState, value: Term, fuel: int = DEFAULT_FUEL,
                      collect: bool = True) -> tuple[Term, ReactiveState]:
    v, heap, nxt = _eval_with_input(s, value, fuel, collect)
    if not (isinstance(v, Into) and isinstance(v.arg, Pair)):
        raise ShapeError(f"a stream step produced {v}, not a cons cell")
    return v.arg.left, ReactiveState(Adv(v.arg.right), heap, nxt)


def react_step_until(s: ReactiveState, value: Term, fuel: int = DEFAULT_FUEL,
                     collect: bool = True) -> tuple[Term, ReactiveState]:
    v, heap, nxt = _eval_with_input(s, value, fuel, collect)
    if isinstance(v, Wait):
        return v.head, ReactiveState(Adv(v.tail), heap, nxt, s.mode)
    if isinstance(v, Now):
        return v.arg, ReactiveState(None, heap, nxt, s.mode)
    raise ShapeError(f"an until step produced {v}, not now or wait")


def react_step_fair(s: ReactiveState, value: Term, fuel: int = DEFAULT_FUEL,
                    collect: bool = True) -> tuple[Term, ReactiveState]:
    out, nxt = react_step_until(s, value, fuel, collect)
    if not nxt.halted:
        return Inj(s.mode, out), nxt
    if not isinstance(out, Pair):
        raise ShapeError(f"a fair stream switched modes with {out}, not a pair")
    v, w = out.left, out.right
    if s.mode == 1:
        return Inj(2, v), ReactiveState(Adv(w), nxt.heap, nxt.input_loc, 2)
    return Inj(1, v), ReactiveState(Out(Adv(w)), nxt.heap, nxt.input_loc, 1)


_STEPS = {Driver.STREAM: react_step_stream, Driver.UNTIL: react_step_until, Driver.FAIR: react_step_fair}


def react_trace(t: Term, kind: Driver, inputs: Iterable[Term], fuel: int = DEFAULT_FUEL,
                collect: bool = True) -> Iterator[StepRecord]:
    """Feed ``inputs`` one per step until they run out or the machine halts."""
    s = init_reactive(t, kind)
    step = _STEPS[kind]
    for i, value in enumerate(inputs, start=1):
        if s.halted:
            return
        out, s = step(s, value, fuel, collect)
        yield StepRecord(i, out, len(s.heap), mode=s.mode, input=value, halted=s.halted)


@dataclass(frozen=True)
class Transcript:
    records: tuple[StepRecord, ...]
    unconsumed: int  # inputs left over after HALT


def run_reactive(t: Term, kind: Driver, inputs: list[Term], fuel: int = DEFAULT_FUEL) -> Transcript:
    records = tuple(react_trace(t, kind, inputs, fuel))
    return Transcript(records, len(inputs) - len(records))
