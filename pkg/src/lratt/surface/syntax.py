"""Surface-only term formers and program structure.

The parser produces core terms mixed with the sugar nodes below; ``desugar``
removes every sugar node.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from lratt.core import Pos, Term, Type


def _pos():
    return field(default=None, compare=False, repr=False)


class Sugar(Term):
    """Marker base class for surface-only nodes."""


@dataclass(frozen=True)
class Let(Sugar):
    var: str
    ann: Optional[Type]
    bound: Term
    body: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Cons(Sugar):
    """``head :: tail``, the stream constructor."""

    head: Term
    tail: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class MultiLam(Sugar):
    binders: tuple[tuple[str, Optional[Type]], ...]
    body: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class UrecAs(Sugar):
    """Clause-style until recursion: inside ``wait_case``, ``self_name tail_var``
    denotes the delayed recursive result."""

    arg: Term
    self_name: str
    now_var: str
    now_case: Term
    wait_var: str
    tail_var: str
    wait_case: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class MutualFix(Sugar):
    """``fix (f, g). (t1, t2)``: two guarded recursive definitions sharing one fixed point."""

    names: tuple[str, str]
    body: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class Decl:
    name: str
    type: Type
    body: Term
    entry: bool = False
    pos: Pos = None
    locked: bool = False  # checked under a lone lock instead of the empty context


@dataclass(frozen=True)
class SourceProgram:
    decls: tuple[Decl, ...] = ()

    @property
    def entry(self) -> Optional[Decl]:
        for d in self.decls:
            if d.entry:
                return d
        return None

    def get(self, name: str) -> Decl:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)
