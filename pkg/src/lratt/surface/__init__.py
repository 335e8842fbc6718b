"""Concrete syntax: parsing, desugaring, printing and value literals."""
from lratt.surface.desugar import ElabDecl, desugar, elaborate, has_sugar
from lratt.surface.literals import parse_value_literal, print_value
from lratt.surface.parser import parse_program, parse_term, parse_type
from lratt.surface.pretty import format_program, format_term, format_type
from lratt.surface.syntax import Decl, SourceProgram

__all__ = [
    "Decl",
    "ElabDecl",
    "SourceProgram",
    "desugar",
    "elaborate",
    "format_program",
    "format_term",
    "format_type",
    "has_sugar",
    "parse_program",
    "parse_term",
    "parse_type",
    "parse_value_literal",
    "print_value",
]
