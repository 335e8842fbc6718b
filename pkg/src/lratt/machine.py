"""Closed step machines for streams, until types and fair streams.

Each step evaluates the current term against ``heap`` followed by a fresh
empty later heap, emits one output, and keeps only the later heap.  Everything
allocated before the tick is garbage collected.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

from lratt.core import (
    Adv,
    Box,
    Fun,
    Heap,
    Inj,
    Into,
    Now,
    Out,
    Pair,
    Term,
    TickedStore,
    Type,
    Unbox,
    Until,
    Wait,
    match_fair,
    match_stream,
)
from lratt.errors import ShapeError
from lratt.evaluator import DEFAULT_FUEL, Evaluator, erase


class Driver(enum.Enum):
    STREAM = "stream"
    UNTIL = "until"
    FAIR = "fair"


def driver_for(a: Type) -> tuple[Driver, bool]:
    """Which machine runs an entry of type ``a``; the flag marks reactive entries."""
    if not isinstance(a, Box):
        raise ValueError(f"entry points have a Box type, not {a}")
    body = a.body
    reactive = False
    if isinstance(body, Fun):
        if match_stream(body.arg) is None:
            raise ValueError(f"reactive entries take a stream argument, not {body.arg}")
        body, reactive = body.res, True
    if match_stream(body) is not None:
        return Driver.STREAM, reactive
    if match_fair(body) is not None:
        return Driver.FAIR, reactive
    if isinstance(body, Until):
        return Driver.UNTIL, reactive
    raise ValueError(f"no machine runs entries of type {a}")


@dataclass(frozen=True)
class StreamState:
    term: Term
    heap: Heap


@dataclass(frozen=True)
class UntilState:
    term: Optional[Term]  # None once HALT has been reached
    heap: Heap

    @property
    def halted(self) -> bool:
        return self.term is None


@dataclass(frozen=True)
class FairState:
    term: Term
    heap: Heap
    mode: int


def tick_store(heap: Heap) -> TickedStore:
    """The heap followed by an empty later heap in the next namespace."""
    return TickedStore(heap, Heap(heap.namespace + 1))


def _carry(store, collect: bool) -> Heap:
    if not isinstance(store, TickedStore):
        raise ShapeError(f"a step ended in store {store}")
    if collect:
        return store.later
    # mutation for testing: keep everything that the collector would drop
    merged = dict(store.now.bindings)
    merged.update(store.later.bindings)
    return Heap(store.later.namespace, merged)


def _run(term: Term, store: TickedStore, fuel: int) -> tuple[Term, TickedStore]:
    v, s = Evaluator(fuel).eval(term, store)
    return v, s


def step_stream(s: StreamState, fuel: int = DEFAULT_FUEL, collect: bool = True) -> tuple[Term, StreamState]:
    v, store = _run(s.term, tick_store(s.heap), fuel)
    if not (isinstance(v, Into) and isinstance(v.arg, Pair)):
        raise ShapeError(f"a stream step produced {v}, not a cons cell")
    return v.arg.left, StreamState(Adv(v.arg.right), _carry(store, collect))


def step_until(s: UntilState, fuel: int = DEFAULT_FUEL, collect: bool = True) -> tuple[Term, UntilState]:
    if s.halted:
        raise ShapeError("the machine has already halted")
    v, store = _run(s.term, tick_store(s.heap), fuel)
    heap = _carry(store, collect)
    if isinstance(v, Wait):
        return v.head, UntilState(Adv(v.tail), heap)
    if isinstance(v, Now):
        return v.arg, UntilState(None, heap)
    raise ShapeError(f"an until step produced {v}, not now or wait")


def step_fair(s: FairState, fuel: int = DEFAULT_FUEL, collect: bool = True) -> tuple[Term, FairState]:
    out, nxt = step_until(UntilState(s.term, s.heap), fuel, collect)
    if not nxt.halted:
        return Inj(s.mode, out), FairState(nxt.term, nxt.heap, s.mode)
    if not isinstance(out, Pair):
        raise ShapeError(f"a fair stream switched modes with {out}, not a pair")
    v, w = out.left, out.right
    if s.mode == 1:
        return Inj(2, v), FairState(Adv(w), nxt.heap, 2)
    return Inj(1, v), FairState(Out(Adv(w)), nxt.heap, 1)


def init_stream(t: Term) -> StreamState:
    return StreamState(Unbox(erase(t)), Heap(0))


def init_until(t: Term) -> UntilState:
    return UntilState(Unbox(erase(t)), Heap(0))


def init_fair(t: Term) -> FairState:
    return FairState(Out(Unbox(erase(t))), Heap(0), 1)


@dataclass(frozen=True)
class StepRecord:
    """One machine step: what came out and how big the carried heap is afterwards."""

    step: int
    output: Term
    heap_size: int
    mode: Optional[int] = None
    input: Optional[Term] = None
    halted: bool = False


def trace(t: Term, driver: Driver, fuel: int = DEFAULT_FUEL, collect: bool = True) -> Iterator[StepRecord]:
    """Run a closed entry step by step; until-runs stop after HALT."""
    i = 0
    if driver is Driver.STREAM:
        s = init_stream(t)
        while True:
            i += 1
            out, s = step_stream(s, fuel, collect)
            yield StepRecord(i, out, len(s.heap))
    elif driver is Driver.UNTIL:
        u = init_until(t)
        while not u.halted:
            i += 1
            out, u = step_until(u, fuel, collect)
            yield StepRecord(i, out, len(u.heap), halted=u.halted)
    else:
        f = init_fair(t)
        while True:
            i += 1
            out, f = step_fair(f, fuel, collect)
            yield StepRecord(i, out, len(f.heap), mode=f.mode)


def run_stream(t: Term, n: int, fuel: int = DEFAULT_FUEL) -> list[Term]:
    s = init_stream(t)
    outs = []
    for _ in range(n):
        out, s = step_stream(s, fuel)
        outs.append(out)
    return outs


def run_until(t: Term, max_steps: int, fuel: int = DEFAULT_FUEL) -> tuple[list[Term], bool]:
    u = init_until(t)
    outs = []
    while not u.halted and len(outs) < max_steps:
        out, u = step_until(u, fuel)
        outs.append(out)
    return outs, u.halted


def run_fair(t: Term, n: int, fuel: int = DEFAULT_FUEL) -> list[tuple[int, Term]]:
    f = init_fair(t)
    outs = []
    for _ in range(n):
        out, f = step_fair(f, fuel)
        outs.append((f.mode, out))
    return outs
