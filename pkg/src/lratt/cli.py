"""Command-line driver: ``lratt check|run|react|trace FILE``.

Exit codes: 0 success, 1 type error, 2 syntax error, 3 runtime failure,
4 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from itertools import islice
from typing import Iterable, Iterator, Optional, TextIO

from lratt.core import Box, Fun, Term, Type, match_stream
from lratt.errors import DesugarError, EvalError, LiteralError, LratSyntaxError, TypeCheckError
from lratt.evaluator import DEFAULT_FUEL
from lratt.machine import Driver, StepRecord, driver_for, trace
from lratt.reactive import react_trace
from lratt.surface import parse_program
from lratt.surface.desugar import ElabDecl
from lratt.surface.literals import parse_value_literal, print_value
from lratt.surface.pretty import format_type
from lratt.typecheck import check_program

EXIT_OK, EXIT_TYPE, EXIT_SYNTAX, EXIT_RUNTIME, EXIT_USAGE = range(5)
DEFAULT_STEPS = 10
DEFAULT_MAX_STEPS = 10_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    file: str
    entry: Optional[str] = None
    driver: str = "auto"
    steps: Optional[int] = None
    until_halt: bool = False
    max_steps: int = DEFAULT_MAX_STEPS
    fuel: int = DEFAULT_FUEL
    input: Optional[str] = None
    format: str = "plain"

    def __post_init__(self):
        if self.steps is not None and self.steps < 0:
            raise UsageError("--steps must be at least 0")
        if self.max_steps < 0:
            raise UsageError("--max-steps must be at least 0")
        if self.fuel < 1:
            raise UsageError("fuel must be at least 1")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lratt", description="Typecheck and run programs with streams, events and fair streams.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in [
        ("check", "typecheck every declaration"),
        ("run", "run a closed entry on the step machine"),
        ("react", "run a reactive entry, one input literal per line"),
        ("trace", "show machine states step by step"),
    ]:
        c = sub.add_parser(name, help=help_)
        c.add_argument("file")
        c.add_argument("--format", choices=["plain", "jsonl"], default="plain")
        if name == "check":
            continue
        c.add_argument("--entry", help="declaration to run (default: the one marked entry)")
        c.add_argument("--driver", choices=["auto", "stream", "until", "fair"], default="auto")
        c.add_argument("--steps", type=int, help="number of steps to run")
        c.add_argument("--until-halt", action="store_true", help="run until HALT, at most --max-steps steps")
        c.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
        c.add_argument("--fuel", type=int, help="evaluation budget per step (default: $LRATT_FUEL)")
        c.add_argument("--input", help="read inputs from this file instead of standard input")
    return p


def _config(argv: list[str]) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    fuel = ns.fuel if getattr(ns, "fuel", None) is not None else None
    if fuel is None:
        env = os.environ.get("LRATT_FUEL")
        try:
            fuel = int(env) if env else DEFAULT_FUEL
        except ValueError:
            raise UsageError(f"LRATT_FUEL must be a number, not {env!r}") from None
    return RunConfig(
        command=ns.command,
        file=ns.file,
        entry=getattr(ns, "entry", None),
        driver=getattr(ns, "driver", "auto"),
        steps=getattr(ns, "steps", None),
        until_halt=getattr(ns, "until_halt", False),
        max_steps=getattr(ns, "max_steps", DEFAULT_MAX_STEPS),
        fuel=fuel,
        input=getattr(ns, "input", None),
        format=ns.format,
    )


def load_program(path: str) -> list[ElabDecl]:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return check_program(parse_program(text))


def select_entry(decls: list[ElabDecl], name: Optional[str]) -> ElabDecl:
    if name is None:
        marked = [d for d in decls if d.entry]
        if not marked:
            raise UsageError("no declaration is marked entry; pass --entry")
        return marked[0]
    for d in decls:
        if d.name == name:
            return d
    raise UsageError(f"no declaration named {name}")


def select_driver(d: ElabDecl, requested: str) -> tuple[Driver, bool]:
    try:
        driver, reactive = driver_for(d.type)
    except ValueError as e:
        raise UsageError(f"{d.name}: {e}") from None
    if requested != "auto" and requested != driver.value:
        raise UsageError(f"{d.name} has type {format_type(d.type)}, which the {requested} machine does not run")
    return driver, reactive


def input_type(a: Type) -> Type:
    assert isinstance(a, Box) and isinstance(a.body, Fun)
    elem = match_stream(a.body.arg)
    assert elem is not None
    return elem


def read_inputs(lines: Iterable[str], ty: Type) -> Iterator[Term]:
    for line in lines:
        if line.strip():
            yield parse_value_literal(line, ty)


def _step_budget(cfg: RunConfig, driver: Driver) -> int:
    if cfg.until_halt:
        return cfg.max_steps
    if cfg.steps is not None:
        return cfg.steps
    return cfg.max_steps if driver is Driver.UNTIL else DEFAULT_STEPS


def render(record: StepRecord, reactive: bool) -> str:
    """The plain transcript line of one step."""
    out = print_value(record.output)
    if reactive:
        return f"i:{print_value(record.input)} o:{out}"
    return out


def render_json(record: StepRecord) -> str:
    obj: dict = {"step": record.step}
    if record.mode is not None:
        obj["mode"] = record.mode
    if record.input is not None:
        obj["input"] = print_value(record.input)
    obj["output"] = print_value(record.output)
    obj["heapSize"] = record.heap_size
    if record.halted:
        obj["halted"] = True
    return json.dumps(obj)


def records_for(d: ElabDecl, driver: Driver, reactive: bool, steps: int, fuel: int,
                inputs: Optional[Iterable[Term]] = None) -> Iterator[StepRecord]:
    """At most ``steps`` machine steps of an entry; reactive entries also stop when inputs run out."""
    if reactive:
        return islice(react_trace(d.term, driver, inputs or (), fuel), steps)
    return islice(trace(d.term, driver, fuel), steps)


def _cmd_check(cfg: RunConfig, out: TextIO) -> int:
    for d in load_program(cfg.file):
        if cfg.format == "jsonl":
            out.write(json.dumps({"decl": d.name, "type": format_type(d.type), "entry": d.entry}) + "\n")
        else:
            out.write(f"{d.name} : {format_type(d.type)}\n")
    return EXIT_OK


def _open_inputs(cfg: RunConfig, stdin: TextIO) -> TextIO:
    if cfg.input is None:
        return stdin
    try:
        return open(cfg.input, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {cfg.input}: {e.strerror}") from None


def _cmd_run(cfg: RunConfig, out: TextIO, stdin: TextIO) -> int:
    decls = load_program(cfg.file)
    d = select_entry(decls, cfg.entry)
    driver, reactive = select_driver(d, cfg.driver)
    if cfg.command == "run" and reactive:
        raise UsageError(f"{d.name} takes an input stream; use 'lratt react'")
    if cfg.command == "react" and not reactive:
        raise UsageError(f"{d.name} takes no input stream; use 'lratt run'")
    inputs = None
    src = None
    if reactive:
        src = _open_inputs(cfg, stdin)
        inputs = read_inputs(src, input_type(d.type))
    budget = _step_budget(cfg, driver)
    try:
        for r in records_for(d, driver, reactive, budget, cfg.fuel, inputs):
            if cfg.command == "trace":
                _write_trace(out, r, reactive, cfg.format)
            elif cfg.format == "jsonl":
                out.write(render_json(r) + "\n")
            else:
                out.write(render(r, reactive) + "\n")
    finally:
        if src is not None and src is not stdin:
            src.close()
    return EXIT_OK


def _write_trace(out: TextIO, r: StepRecord, reactive: bool, fmt: str) -> None:
    if fmt == "jsonl":
        out.write(render_json(r) + "\n")
        return
    mode = f" mode {r.mode}" if r.mode is not None else ""
    halted = " HALT" if r.halted else ""
    out.write(f"step {r.step}{mode}{halted}\n")
    if reactive:
        out.write(f"  input  {print_value(r.input)}\n")
    out.write(f"  output {print_value(r.output)}\n")
    out.write(f"  heap   {r.heap_size} bindings\n")


def main(argv: Optional[list[str]] = None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    cfg: Optional[RunConfig] = None
    try:
        cfg = _config(argv)
        if cfg.command == "check":
            return _cmd_check(cfg, stdout)
        return _cmd_run(cfg, stdout, stdin)
    except UsageError as e:
        stderr.write(f"lratt: usage error: {e}\n")
        return EXIT_USAGE
    except (LratSyntaxError, DesugarError) as e:
        stderr.write(f"{cfg.file}:{e}\n" if cfg else f"lratt: {e}\n")
        return EXIT_SYNTAX
    except LiteralError as e:
        stderr.write(f"lratt: bad input literal: {e}\n")
        return EXIT_SYNTAX
    except TypeCheckError as e:
        stderr.write(f"{cfg.file}:{e}\n" if cfg else f"lratt: {e}\n")
        if cfg is not None and cfg.format == "jsonl":
            stdout.write(json.dumps(e.to_json()) + "\n")
        return EXIT_TYPE
    except EvalError as e:
        stderr.write(f"lratt: runtime failure: {e}\n")
        return EXIT_RUNTIME


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
