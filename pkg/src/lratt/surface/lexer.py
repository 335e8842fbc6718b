"""Tokenizer for ``.lratt`` source text."""
from __future__ import annotations

import re
from dataclasses import dataclass

from lratt.errors import LratSyntaxError

KEYWORDS = {
    "def", "entry", "locked", "fun", "fix", "let", "in", "case", "of", "inl", "inr", "urec", "nrec",
    "now", "wait", "rec", "as", "zero", "suc", "delay", "adv", "box", "unbox", "into", "out",
    "fst", "snd",
    "Unit", "Nat", "Box", "Next", "Later", "Fix", "Until", "Str", "Ev", "Dia", "Fair", "Fair'",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<num>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>::|->|\(\)|[()\{\},;:=.*+])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "kw", "num", "sym" or "eof"
    text: str
    line: int
    col: int

    @property
    def pos(self) -> tuple[int, int]:
        return (self.line, self.col)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise LratSyntaxError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        col = i - line_start + 1
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "name":
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "name", word, line, col))
        elif kind in ("num", "sym"):
            tokens.append(Token(kind, m.group(), line, col))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens
