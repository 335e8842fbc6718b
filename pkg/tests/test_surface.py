from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lratt.core import (
    Case,
    Fun,
    Inj,
    Into,
    Lam,
    Later,
    Nat,
    Pair,
    Prod,
    RecUntil,
    Sum,
    TVar,
    Unit,
    UnitVal,
    alpha_equal,
    fair_type,
    numeral,
    stream_type,
)
from lratt.corpus import CORPUS_DIR
from lratt.errors import DesugarError, LiteralError, LratSyntaxError
from lratt.surface import (
    desugar,
    elaborate,
    format_program,
    format_term,
    format_type,
    has_sugar,
    parse_program,
    parse_term,
    parse_type,
    parse_value_literal,
    print_value,
)
from lratt.surface.lexer import tokenize

CORPUS_FILES = sorted(CORPUS_DIR.glob("*.lratt"))


def test_tokens_carry_positions_and_skip_comments():
    toks = tokenize("def x -- note\n  : Nat")
    assert [(t.kind, t.text, t.line, t.col) for t in toks] == [
        ("kw", "def", 1, 1),
        ("name", "x", 1, 5),
        ("sym", ":", 2, 3),
        ("kw", "Nat", 2, 5),
        ("eof", "", 2, 8),
    ]


def test_unexpected_character_is_a_syntax_error():
    with pytest.raises(LratSyntaxError) as e:
        tokenize("def x : Nat = 1 $")
    assert (e.value.line, e.value.col) == (1, 17)


def test_type_precedence():
    assert parse_type("Nat * Nat + Unit -> Nat") == Fun(Sum(Prod(Nat(), Nat()), Unit()), Nat())
    assert parse_type("Nat -> Nat -> Nat") == Fun(Nat(), Fun(Nat(), Nat()))
    assert parse_type("Later Nat * Nat") == Prod(Later(Nat()), Nat())
    assert parse_type("Str Nat") == stream_type(Nat())
    assert parse_type("Fair Nat Unit") == fair_type(Nat(), Unit())
    assert parse_type("Fix s. Nat * s") == stream_type(Nat())
    assert parse_type("Nat Until Nat Until Unit") == parse_type("Nat Until (Nat Until Unit)")


def test_application_and_keywords_take_atoms():
    t = parse_term("adv f x")
    assert format_term(t) == "adv f x"
    assert parse_term("inl 3") == Inj(1, numeral(3))
    assert parse_term("1 :: 2 :: xs") == parse_term("1 :: (2 :: xs)")


@pytest.mark.parametrize("src", ["fun . x", "(1, 2", "case x of { inl a -> a }", "urec u { now x -> x ; wait a b -> b }"])
def test_malformed_terms(src):
    with pytest.raises(LratSyntaxError):
        parse_term(src)


def test_duplicate_declarations_are_rejected():
    with pytest.raises(LratSyntaxError):
        parse_program("def a : Nat = 1\ndef a : Nat = 2")


def test_one_entry_per_program():
    with pytest.raises(LratSyntaxError):
        parse_program("entry def a : Nat = 1\nentry def b : Nat = 2")


def test_types_print_parseably():
    for src in ["Box (Str Nat -> Str Nat)", "Later (Nat * Unit) -> Later Nat", "Fix s. s * (Nat -> Dia Nat * s)",
                "(Nat -> Nat) -> Nat", "Fair' Nat Unit", "Nat + Nat * Nat"]:
        a = parse_type(src)
        assert parse_type(format_type(a)) == a


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.stem)
def test_parse_print_round_trip_on_corpus(path: Path):
    decls = elaborate(parse_program(path.read_text()))
    printed = format_program([(d.name, d.type, d.body, d.entry, d.locked) for d in decls])
    again = elaborate(parse_program(printed))
    assert [d.name for d in again] == [d.name for d in decls]
    for a, b in zip(decls, again):
        assert a.type == b.type
        assert alpha_equal(a.body, b.body), a.name
        assert (a.entry, a.locked) == (b.entry, b.locked)


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.stem)
def test_desugared_corpus_has_no_sugar(path: Path):
    for d in elaborate(parse_program(path.read_text())):
        assert not has_sugar(d.body) and not has_sugar(d.term)


def test_cons_and_let_desugar():
    assert desugar(parse_term("1 :: xs")) == Into(Pair(numeral(1), parse_term("xs")))
    t = desugar(parse_term("let x = 1 in (x, x)"))
    assert isinstance(t, Case) and t.arg == Inj(1, numeral(1))


def test_multi_binder_lambda_desugars_to_nested_lambdas():
    t = desugar(parse_term("fun a b. (a, b)"))
    assert isinstance(t, Lam) and isinstance(t.body, Lam)


def test_urec_as_binds_a_delayed_recursive_call():
    t = desugar(parse_term("urec d as go { now a -> a ; wait u w -> go w }"))
    assert isinstance(t, RecUntil)
    assert t.wait_case.free_vars <= {t.rec_var}


def test_recursive_call_must_use_the_tail():
    with pytest.raises(DesugarError):
        desugar(parse_term("urec d as go { now a -> a ; wait u w -> go d }"))


def test_later_declarations_see_earlier_ones():
    decls = elaborate(parse_program("def one : Nat = 1\ndef two : Nat = suc one"))
    assert decls[1].body.free_vars == {"one"}
    assert not decls[1].term.free_vars


# value literals


def test_literal_examples():
    a = parse_type("(Nat * Unit) + Nat")
    v = parse_value_literal("inl (3, ())", a)
    assert v == Inj(1, Pair(numeral(3), UnitVal()))
    assert print_value(v) == "inl (3, ())"
    assert parse_value_literal("  7 ", Nat()) == numeral(7)


@pytest.mark.parametrize("text,ty", [("x", "Nat"), ("inl", "Nat + Nat"), ("(1 2)", "Nat * Nat"), ("1 1", "Nat")])
def test_bad_literals(text, ty):
    with pytest.raises(LiteralError):
        parse_value_literal(text, parse_type(ty))


def test_literals_need_value_types():
    with pytest.raises(LiteralError):
        parse_value_literal("1", Fun(Nat(), Nat()))
    with pytest.raises(LiteralError):
        print_value(parse_term("fun x. x"))


value_types = st.recursive(
    st.sampled_from([Nat(), Unit()]),
    lambda sub: st.one_of(st.tuples(sub, sub).map(lambda p: Prod(*p)), st.tuples(sub, sub).map(lambda p: Sum(*p))),
    max_leaves=6,
)


def values_of(a):
    if isinstance(a, Nat):
        return st.integers(0, 40).map(numeral)
    if isinstance(a, Unit):
        return st.just(UnitVal())
    if isinstance(a, Prod):
        return st.tuples(values_of(a.left), values_of(a.right)).map(lambda p: Pair(*p))
    return st.one_of(values_of(a.left).map(lambda v: Inj(1, v)), values_of(a.right).map(lambda v: Inj(2, v)))


@given(value_types.flatmap(lambda a: st.tuples(st.just(a), values_of(a))))
def test_literal_round_trip(av):
    a, v = av
    assert parse_value_literal(print_value(v), a) == v


def test_tvar_is_not_a_value_type():
    with pytest.raises(LiteralError):
        parse_value_literal("1", TVar("a"))
