"""Recursive-descent parser for programs, terms and types.

Type precedence, loosest first: ``Fix a.``, ``->``, ``Until``, ``+``, ``*``,
the prefix formers (``Box``, ``Next``, ``Later``, ``Str``, ``Ev``, ``Dia``,
``Fair``, ``Fair'``), then atoms.  The binary formers associate to the right.

Term keywords such as ``delay`` or ``wait`` take atomic arguments, exactly like
function application, so ``adv f x`` reads as ``(adv f) x``.
"""
from __future__ import annotations

from typing import Optional

from lratt.core import (
    Adv,
    Ann,
    App,
    Box,
    BoxT,
    Case,
    Delay,
    DelayT,
    FixT,
    Fix,
    Fun,
    Inj,
    Into,
    Lam,
    Later,
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
    TVar,
    Type,
    Unbox,
    Unit,
    UnitVal,
    Until,
    Var,
    Wait,
    dia_type,
    event_type,
    fair_prime_type,
    fair_type,
    numeral,
    stream_type,
)
from lratt.errors import LratSyntaxError
from lratt.surface.lexer import Token, tokenize
from lratt.surface.syntax import Cons, Decl, Let, MultiLam, MutualFix, SourceProgram, UrecAs

_UNARY_TERMS = {
    "delay": DelayT,
    "adv": Adv,
    "box": BoxT,
    "unbox": Unbox,
    "now": Now,
    "into": Into,
    "out": Out,
    "suc": Suc,
}
_UNARY_TYPES = {"Box": Box, "Next": Delay, "Later": Later, "Str": stream_type, "Ev": event_type, "Dia": dia_type}
_ATOM_START = {"(", "()"}


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise LratSyntaxError(f"{msg}, found {found}", tok.line, tok.col)

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("kw", "sym") and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def name(self) -> str:
        if self.tok.kind != "name":
            self.error("expected an identifier")
        return self.advance().text

    # programs

    def program(self) -> SourceProgram:
        decls = []
        seen = set()
        while self.tok.kind != "eof":
            start = self.tok
            entry = locked = False
            if self.at("entry"):
                self.advance()
                entry = True
            if self.at("locked"):
                self.advance()
                locked = True
            self.expect("def")
            name_tok = self.tok
            name = self.name()
            if name in seen:
                self.error(f"duplicate declaration {name}", name_tok)
            seen.add(name)
            self.expect(":")
            ty = self.type()
            self.expect("=")
            body = self.term()
            decls.append(Decl(name, ty, body, entry, start.pos, locked))
        if sum(d.entry for d in decls) > 1:
            raise LratSyntaxError("more than one entry declaration", 1, 1)
        return SourceProgram(tuple(decls))

    # types

    def type(self) -> Type:
        if self.at("Fix"):
            self.advance()
            v = self.name()
            self.expect(".")
            return Fix(v, self.type())
        left = self.until_type()
        if self.at("->"):
            self.advance()
            return Fun(left, self.type())
        return left

    def until_type(self) -> Type:
        left = self.sum_type()
        if self.at("Until"):
            self.advance()
            return Until(left, self.until_type())
        return left

    def sum_type(self) -> Type:
        left = self.prod_type()
        if self.at("+"):
            self.advance()
            return Sum(left, self.sum_type())
        return left

    def prod_type(self) -> Type:
        left = self.prefix_type()
        if self.at("*"):
            self.advance()
            return Prod(left, self.prod_type())
        return left

    def prefix_type(self) -> Type:
        t = self.tok
        if t.kind == "kw" and t.text in _UNARY_TYPES:
            self.advance()
            return _UNARY_TYPES[t.text](self.prefix_type())
        if self.at("Fair", "Fair'"):
            self.advance()
            a = self.prefix_type()
            b = self.prefix_type()
            return fair_type(a, b) if t.text == "Fair" else fair_prime_type(a, b)
        return self.atom_type()

    def atom_type(self) -> Type:
        t = self.tok
        if self.at("Unit", "()"):
            self.advance()
            return Unit()
        if self.at("Nat"):
            self.advance()
            return Nat()
        if t.kind == "name":
            self.advance()
            return TVar(t.text)
        if self.at("("):
            self.advance()
            ty = self.type()
            self.expect(")")
            return ty
        if self.at("Fix"):
            return self.type()
        self.error("expected a type")

    # terms

    def term(self) -> Term:
        t = self.tok
        if self.at("fun"):
            return self.lambda_term()
        if self.at("fix"):
            self.advance()
            if self.at("("):
                self.advance()
                f = self.name()
                self.expect(",")
                g = self.name()
                self.expect(")")
                self.expect(".")
                return MutualFix((f, g), self.term(), pos=t.pos)
            x = self.name()
            self.expect(".")
            return FixT(x, self.term(), pos=t.pos)
        if self.at("let"):
            self.advance()
            x = self.name()
            ann = None
            if self.at(":"):
                self.advance()
                ann = self.type()
            self.expect("=")
            bound = self.term()
            self.expect("in")
            return Let(x, ann, bound, self.term(), pos=t.pos)
        if self.at("case"):
            return self.case_term()
        if self.at("urec"):
            return self.urec_term()
        if self.at("nrec"):
            return self.nrec_term()
        return self.cons_term()

    def lambda_term(self) -> Term:
        start = self.expect("fun")
        binders = []
        while not self.at("."):
            if self.at("("):
                self.advance()
                x = self.name()
                self.expect(":")
                ty = self.type()
                self.expect(")")
                binders.append((x, ty))
            else:
                binders.append((self.name(), None))
        if not binders:
            self.error("expected a binder")
        self.expect(".")
        body = self.term()
        if len(binders) == 1:
            x, ty = binders[0]
            return Lam(x, body, ty, pos=start.pos)
        return MultiLam(tuple(binders), body, pos=start.pos)

    def case_term(self) -> Term:
        start = self.expect("case")
        scrut = self.term()
        self.expect("of")
        self.expect("{")
        self.expect("inl")
        x1 = self.name()
        self.expect("->")
        b1 = self.term()
        self.expect(";")
        self.expect("inr")
        x2 = self.name()
        self.expect("->")
        b2 = self.term()
        self.expect("}")
        return Case(scrut, x1, b1, x2, b2, pos=start.pos)

    def urec_term(self) -> Term:
        start = self.expect("urec")
        scrut = self.app_term()
        self_name = None
        if self.at("as"):
            self.advance()
            self_name = self.name()
        self.expect("{")
        self.expect("now")
        x = self.name()
        self.expect("->")
        s = self.term()
        self.expect(";")
        self.expect("wait")
        x2 = self.name()
        y = self.name()
        z = None
        if self.at("rec"):
            self.advance()
            z = self.name()
        self.expect("->")
        w = self.term()
        self.expect("}")
        if self_name is None:
            if z is None:
                self.error("expected 'rec' binder (or 'urec ... as f')")
            return RecUntil(x, s, x2, y, z, w, scrut, pos=start.pos)
        if z is not None:
            self.error("use either 'as f' or 'rec z', not both")
        return UrecAs(scrut, self_name, x, s, x2, y, w, pos=start.pos)

    def nrec_term(self) -> Term:
        start = self.expect("nrec")
        scrut = self.app_term()
        self.expect("{")
        self.expect("zero")
        self.expect("->")
        base = self.term()
        self.expect(";")
        self.expect("suc")
        x = self.name()
        self.expect("rec")
        y = self.name()
        self.expect("->")
        step = self.term()
        self.expect("}")
        return RecNat(base, x, y, step, scrut, pos=start.pos)

    def cons_term(self) -> Term:
        head = self.app_term()
        if self.at("::"):
            tok = self.advance()
            return Cons(head, self.term(), pos=tok.pos)
        return head

    def app_term(self) -> Term:
        t = self.tok
        if t.kind == "kw" and t.text in _UNARY_TERMS:
            self.advance()
            fn = _UNARY_TERMS[t.text](self.atom_term(), pos=t.pos)
        elif self.at("fst", "snd"):
            self.advance()
            fn = Proj(1 if t.text == "fst" else 2, self.atom_term(), pos=t.pos)
        elif self.at("inl", "inr"):
            self.advance()
            fn = Inj(1 if t.text == "inl" else 2, self.atom_term(), pos=t.pos)
        elif self.at("wait"):
            self.advance()
            a = self.atom_term()
            fn = Wait(a, self.atom_term(), pos=t.pos)
        else:
            fn = self.atom_term()
        while self.starts_atom():
            arg_tok = self.tok
            fn = App(fn, self.atom_term(), pos=arg_tok.pos)
        return fn

    def starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("name", "num") or (t.kind == "sym" and t.text in _ATOM_START)

    def atom_term(self) -> Term:
        t = self.tok
        if t.kind == "name":
            self.advance()
            return Var(t.text, pos=t.pos)
        if t.kind == "num":
            self.advance()
            n = numeral(int(t.text))
            return n if int(t.text) else type(n)(pos=t.pos)
        if self.at("()"):
            self.advance()
            return UnitVal(pos=t.pos)
        if self.at("("):
            self.advance()
            inner = self.term()
            if self.at(","):
                self.advance()
                right = self.term()
                self.expect(")")
                return Pair(inner, right, pos=t.pos)
            if self.at(":"):
                self.advance()
                ty = self.type()
                self.expect(")")
                return Ann(inner, ty, pos=t.pos)
            self.expect(")")
            return inner
        self.error("expected a term")


def parse_program(text: str) -> SourceProgram:
    return Parser(text).program()


def parse_term(text: str) -> Term:
    p = Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    return t


def parse_type(text: str) -> Type:
    p = Parser(text)
    t = p.type()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    return t
