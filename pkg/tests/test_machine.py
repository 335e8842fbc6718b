from itertools import islice

import pytest

from lratt.core import Heap, Inj, Location, numeral
from lratt.corpus import load_decl, records
from lratt.errors import ShapeError
from lratt.machine import (
    Driver,
    UntilState,
    driver_for,
    init_fair,
    init_stream,
    init_until,
    run_fair,
    run_stream,
    run_until,
    step_stream,
    step_until,
    trace,
)
from lratt.surface import parse_type

from support import entry


def term_of(name: str):
    return load_decl(entry(name)).term


@pytest.mark.parametrize(
    "ty,expected",
    [
        ("Box (Str Nat)", (Driver.STREAM, False)),
        ("Box (Dia Nat)", (Driver.UNTIL, False)),
        ("Box (Nat Until Unit)", (Driver.UNTIL, False)),
        ("Box (Fair Nat Unit)", (Driver.FAIR, False)),
        ("Box (Str Nat -> Str Unit)", (Driver.STREAM, True)),
        ("Box (Str Nat -> Dia Nat)", (Driver.UNTIL, True)),
        ("Box (Str Nat -> Fair Nat Nat)", (Driver.FAIR, True)),
    ],
)
def test_driver_selection(ty, expected):
    assert driver_for(parse_type(ty)) == expected


@pytest.mark.parametrize("ty", ["Str Nat", "Box Nat", "Box (Nat -> Str Nat)", "Box (Ev Nat)"])
def test_types_without_a_machine(ty):
    with pytest.raises(ValueError):
        driver_for(parse_type(ty))


def test_stream_steps_emit_heads_and_keep_one_cell():
    s = init_stream(term_of("zeros"))
    for _ in range(5):
        out, s = step_stream(s)
        assert out == numeral(0)
        assert len(s.heap) == 1


def test_heap_namespaces_advance_each_step():
    s = init_stream(term_of("nats"))
    for i in range(1, 4):
        _, s = step_stream(s)
        assert s.heap.namespace == i
        assert all(loc.namespace == i for loc in s.heap.bindings)


def test_until_machine_halts_once():
    outs, halted = run_until(term_of("timer3"), 100)
    assert halted and len(outs) == 4
    u = init_until(term_of("timer0"))
    _, u = step_until(u)
    assert u.halted
    with pytest.raises(ShapeError):
        step_until(u)


def test_until_budget_without_halting():
    outs, halted = run_until(term_of("timer10"), 3)
    assert len(outs) == 3 and not halted


def test_fair_outputs_are_tagged_by_mode():
    outs = run_fair(term_of("altFairEx"), 4)
    assert outs == [(2, Inj(2, numeral(0))), (1, Inj(1, numeral(1))), (2, Inj(2, numeral(0))), (1, Inj(1, numeral(3)))]
    assert init_fair(term_of("altFairEx")).mode == 1


def test_running_the_wrong_machine_is_a_shape_error():
    with pytest.raises(ShapeError):
        run_stream(term_of("timer3"), 1)
    with pytest.raises(ShapeError):
        list(islice(trace(term_of("zeros"), Driver.UNTIL), 1))


def test_trace_records():
    recs = list(islice(trace(term_of("evens"), Driver.STREAM), 3))
    assert [r.step for r in recs] == [1, 2, 3]
    assert [r.output for r in recs] == [numeral(0), numeral(2), numeral(4)]
    assert all(r.mode is None and r.input is None and not r.halted for r in recs)
    until = list(trace(term_of("bufferEx"), Driver.UNTIL))
    assert [r.halted for r in until] == [False] * 4 + [True]


@pytest.mark.parametrize("name", ["zeros", "altEx", "altFairEx", "joinEx", "client"])
def test_identical_runs_give_identical_states(name):
    e = entry(name)
    a = records(e, 60)
    b = records(e, 60)
    assert a == b
    if e.driver == "stream":
        s1, s2 = init_stream(term_of(name)), init_stream(term_of(name))
        for _ in range(20):
            o1, s1 = step_stream(s1)
            o2, s2 = step_stream(s2)
            assert (o1, s1) == (o2, s2)


@pytest.mark.parametrize("name", ["nats", "altEx", "joinEx", "altFairEx"])
def test_disabling_collection_keeps_outputs_but_grows_the_heap(name):
    e = entry(name)
    kept = records(e, 40)
    leaky = records(e, 40, collect=False)
    assert [r.output for r in kept] == [r.output for r in leaky]
    assert max(r.heap_size for r in leaky) > max(r.heap_size for r in kept)


def test_state_after_halt_has_no_term():
    assert UntilState(None, Heap(0)).halted
    assert not UntilState(numeral(0), Heap(0)).halted


def test_collection_drops_the_now_heap():
    s = init_stream(term_of("altEx"))
    _, s1 = step_stream(s)
    _, s2 = step_stream(s1)
    assert not set(s1.heap.bindings) & set(s2.heap.bindings)
    assert Location(1, 0) in s1.heap.bindings
