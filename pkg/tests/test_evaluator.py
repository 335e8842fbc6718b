import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lratt.core import (
    NULL,
    Adv,
    App,
    BoxT,
    Case,
    DelayT,
    Heap,
    Inj,
    Lam,
    Loc,
    Location,
    Now,
    Pair,
    Proj,
    RecNat,
    SingleHeap,
    Suc,
    TickedStore,
    Unbox,
    UnitVal,
    Var,
    Wait,
    locations,
    nat_value,
    numeral,
    store_extends,
)
from lratt.errors import ErrorKind, EvalError
from lratt.evaluator import Evaluator, derive, empty_ticked, evaluate
from lratt.surface import desugar, parse_term

from support import DERIVATION_CASES, DERIVATION_SKELETONS, GOLDEN, derivation_for, skeleton


def ev(src: str, store=None):
    return evaluate(desugar(parse_term(src)), store if store is not None else empty_ticked())


# individual rules


def test_beta_and_pairs():
    v, _ = ev("(fun x. (x, suc x)) 2")
    assert v == Pair(numeral(2), numeral(3))
    assert ev("snd ((fun x. x) (1, 2))")[0] == numeral(2)


def test_case_picks_the_branch():
    assert ev("case inr 4 of { inl a -> 0 ; inr b -> suc b }")[0] == numeral(5)


def test_natural_recursion():
    src = "nrec 3 { zero -> 10 ; suc k rec r -> suc r }"
    assert nat_value(ev(src)[0]) == 13


def test_delay_allocates_in_the_rightmost_heap():
    v, s = ev("delay (1, 2)")
    assert v == Loc(Location(1, 0))
    assert s.later.bindings[Location(1, 0)] == Pair(numeral(1), numeral(2))
    assert not s.now.bindings


def test_adv_reads_the_now_heap():
    now = Heap(0, {Location(0, 0): numeral(7)})
    v, _ = evaluate(Adv(Loc(Location(0, 0))), TickedStore(now, Heap(1)))
    assert v == numeral(7)


def test_adv_of_a_later_location_dangles():
    later = Heap(1, {Location(1, 0): numeral(7)})
    with pytest.raises(EvalError) as e:
        evaluate(Adv(Loc(Location(1, 0))), TickedStore(Heap(0), later))
    assert e.value.kind is ErrorKind.DANGLING_LOCATION


def test_adv_needs_a_ticked_store():
    with pytest.raises(EvalError) as e:
        evaluate(Adv(Loc(Location(0, 0))), SingleHeap(Heap(0)))
    assert e.value.kind is ErrorKind.ADV_WITHOUT_TICK


def test_delay_under_the_null_store():
    with pytest.raises(EvalError) as e:
        evaluate(DelayT(UnitVal()), NULL)
    assert e.value.kind is ErrorKind.NULL_STORE_ALLOC


def test_unbox_of_box_runs_the_body_in_the_current_store():
    v, s = ev("unbox (box (delay 3))")
    assert isinstance(v, Loc) and s.later.bindings[v.loc] == numeral(3)


def test_unbox_under_the_null_store():
    with pytest.raises(EvalError) as e:
        evaluate(Unbox(BoxT(UnitVal())), NULL)
    assert e.value.kind is ErrorKind.NULL_STORE_READ


def test_until_recursion_now_case():
    assert ev("urec (now 4) { now x -> suc x ; wait a b rec r -> 0 }")[0] == numeral(5)


def test_stuck_terms():
    cases = [
        ("fst ()", ErrorKind.NOT_A_PAIR),
        ("() 1", ErrorKind.NOT_A_FUNCTION),
        ("case () of { inl a -> a ; inr b -> b }", ErrorKind.NOT_A_SUM),
        ("unbox 3", ErrorKind.NOT_A_BOX),
        ("out ()", ErrorKind.NOT_AN_INTO),
        ("adv 1", ErrorKind.NOT_A_LOCATION),
        ("urec () { now x -> x ; wait a b rec r -> r }", ErrorKind.NOT_AN_UNTIL_VALUE),
    ]
    for src, kind in cases:
        with pytest.raises(EvalError) as e:
            ev(src)
        assert e.value.kind is kind, src


def test_free_variables_are_stuck():
    with pytest.raises(EvalError) as e:
        evaluate(Var("x"), empty_ticked())
    assert e.value.kind is ErrorKind.OPEN_TERM


def test_fuel_bounds_divergence():
    omega = "(fun x. x x) (fun x. x x)"
    with pytest.raises(EvalError) as e:
        evaluate(desugar(parse_term(omega)), empty_ticked(), fuel=1000)
    assert e.value.kind is ErrorKind.FUEL_EXHAUSTED


def test_type_ascriptions_are_ignored():
    assert ev("(1 : Nat)")[0] == numeral(1)


# derivations


@pytest.mark.parametrize("name", [c[0] for c in DERIVATION_CASES])
def test_derivation_matches_the_hand_derivation(name):
    d = derivation_for(name)
    expected = (GOLDEN / "derivations" / f"{name}.txt").read_text().splitlines()
    assert d.lines() == expected
    assert skeleton(d) == DERIVATION_SKELETONS[name]


def test_derivation_records_the_same_result_as_plain_evaluation():
    t = desugar(parse_term("adv (delay ((fun x. (x, x)) 2))"))
    v, s, d = derive(t, empty_ticked())
    assert (v, s) == evaluate(t, empty_ticked())
    assert (d.value, d.result_store) == (v, s)


# properties over generated terms that always evaluate


def _closed():
    """Closed terms whose evaluation in a ticked store succeeds and whose value has no locations."""
    base = st.one_of(st.integers(0, 4).map(numeral), st.just(UnitVal()))

    def extend(sub):
        return st.one_of(
            st.tuples(sub, sub).map(lambda p: Pair(*p)),
            st.tuples(st.sampled_from([1, 2]), sub, sub).map(lambda p: Proj(p[0], Pair(p[1], p[2]))),
            st.tuples(st.sampled_from([1, 2]), sub, sub, sub).map(
                lambda p: Case(Inj(p[0], p[1]), "a", Pair(Var("a"), p[2]), "b", Pair(p[3], Var("b")))
            ),
            sub.map(lambda t: App(Lam("x", Pair(Var("x"), Var("x"))), t)),
            sub.map(lambda t: Adv(DelayT(t))),
            sub.map(lambda t: Unbox(BoxT(t))),
            st.tuples(st.integers(0, 3), sub).map(
                lambda p: RecNat(p[1], "k", "r", Pair(Var("k"), Var("r")), numeral(p[0]))
            ),
            sub.map(lambda t: Wait(t, Adv(DelayT(Now(t))))),
        )

    return st.recursive(base, extend, max_leaves=6)


def _ticked_stores():
    return st.integers(0, 3).map(
        lambda n: TickedStore(Heap(0, {Location(0, i): numeral(i) for i in range(n)}), Heap(1))
    )


@settings(max_examples=150)
@given(_closed(), _ticked_stores())
def test_evaluation_is_deterministic(t, s):
    assert evaluate(t, s) == evaluate(t, s)


@settings(max_examples=150)
@given(_closed(), _ticked_stores())
def test_evaluation_only_extends_the_store(t, s):
    _, s2 = evaluate(t, s)
    assert store_extends(s, s2)
    assert s2.now.well_scoped() and s2.later.well_scoped()


@settings(max_examples=150)
@given(_closed(), _ticked_stores())
def test_more_fuel_never_changes_a_result(t, s):
    ev_ = Evaluator()
    out = ev_.eval(t, s)
    assert evaluate(t, s, fuel=ev_.used) == out
    assert evaluate(t, s, fuel=ev_.used * 3) == out
    with pytest.raises(EvalError):
        evaluate(t, s, fuel=ev_.used - 1)


@settings(max_examples=150)
@given(_closed())
def test_values_of_first_order_terms_are_location_free(t):
    v, _ = evaluate(t, empty_ticked())
    assert v.is_value and not locations(v)


@settings(max_examples=150)
@given(_closed(), _ticked_stores())
def test_values_evaluate_to_themselves_in_one_step(t, s):
    v, _ = evaluate(t, s)
    assert evaluate(v, s, fuel=1) == (v, s)


@settings(max_examples=100)
@given(_closed().filter(lambda t: not locations(t)))
def test_null_store_evaluation_leaves_the_store_alone(t):
    try:
        _, s = evaluate(t, NULL)
    except EvalError as e:
        # anything that needs a heap is refused outright
        assert e.kind in (ErrorKind.NULL_STORE_ALLOC, ErrorKind.NULL_STORE_READ, ErrorKind.ADV_WITHOUT_TICK)
    else:
        assert s is NULL


def test_sucs_of_large_numerals_stay_compact():
    v, _ = ev("suc 999")
    assert nat_value(v) == 1000 and isinstance(v, Suc)
