"""The example corpus: entries, their manifest, and a harness that checks them.

Each entry names one declaration of a ``.lratt`` file together with what is
expected of it: a type error of a given kind, or a type plus runnable
properties (a golden transcript, a heap bound, a halting step, a mode window).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice
from pathlib import Path
from typing import Callable, Iterable, Optional

from lratt.core import Box, Fun, Sum, Term, Type, Until, locations, match_fair, match_stream, numeral
from lratt.errors import EvalError, TypeCheckError
from lratt.evaluator import DEFAULT_FUEL
from lratt.machine import Driver, StepRecord, driver_for, trace
from lratt.reactive import react_trace
from lratt.surface import parse_program, parse_type
from lratt.surface.desugar import ElabDecl
from lratt.surface.literals import parse_value_literal, print_value
from lratt.typecheck import check_program, has_type

CORPUS_DIR = Path(__file__).parent / "programs"
GOLDEN_DIR = CORPUS_DIR / "golden"
MANIFEST = CORPUS_DIR / "manifest.json"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    file: str
    decl: str
    expect: str  # "well-typed" or "ill-typed"
    type: Optional[str] = None
    error: Optional[str] = None  # TypeErrorKind value for ill-typed entries
    driver: Optional[str] = None
    reactive: bool = False
    steps: int = 0  # step budget for the property checks
    heap_bound: Optional[int] = None
    halt_step: Optional[int] = None
    window: Optional[int] = None  # both fair modes occur in every window of this width
    window_steps: int = 2000  # ... within this many steps
    golden: Optional[str] = None  # transcript file under golden/
    inputs: Optional[str] = None  # input file under golden/ for reactive goldens
    stream_of: Optional[str] = None  # the runFair conversion of this fair entry
    oracle: Optional[str] = None  # how the golden was validated

    @property
    def well_typed(self) -> bool:
        return self.expect == "well-typed"

    @property
    def path(self) -> Path:
        return CORPUS_DIR / self.file

    @property
    def machine(self) -> Optional[Driver]:
        return Driver(self.driver) if self.driver else None


def build_corpus(manifest: Path = MANIFEST) -> list[CorpusEntry]:
    with open(manifest, encoding="utf-8") as f:
        data = json.load(f)
    return [CorpusEntry(**e) for e in data["entries"]]


@lru_cache(maxsize=None)
def load_file(path: Path) -> tuple[ElabDecl, ...]:
    return tuple(check_program(parse_program(path.read_text(encoding="utf-8"))))


def load_decl(entry: CorpusEntry) -> ElabDecl:
    for d in load_file(entry.path):
        if d.name == entry.decl:
            return d
    raise KeyError(f"{entry.file} has no declaration {entry.decl}")


def typing_error(entry: CorpusEntry) -> Optional[TypeCheckError]:
    """The error an ill-typed entry raises, or None if its file checks."""
    try:
        check_program(parse_program(entry.path.read_text(encoding="utf-8")))
    except TypeCheckError as e:
        return e
    return None


def random_inputs(rng: random.Random, n: int, bound: int = 10) -> list[Term]:
    return [numeral(rng.randrange(bound)) for _ in range(n)]


def golden_inputs(entry: CorpusEntry) -> list[Term]:
    assert entry.inputs is not None
    ty = _input_elem(load_decl(entry))
    lines = (GOLDEN_DIR / entry.inputs).read_text(encoding="utf-8").splitlines()
    return [parse_value_literal(line, ty) for line in lines if line.strip()]


def _input_elem(d: ElabDecl):
    from lratt.cli import input_type

    return input_type(d.type)


def records(entry: CorpusEntry, steps: int, inputs: Optional[Iterable[Term]] = None, collect: bool = True,
            fuel: int = DEFAULT_FUEL) -> list[StepRecord]:
    """Run an entry's machine for at most ``steps`` steps."""
    d = load_decl(entry)
    driver = entry.machine
    if entry.reactive:
        if inputs is None:
            inputs = random_inputs(random.Random(0), steps)
        return list(islice(react_trace(d.term, driver, inputs, fuel, collect), steps))
    return list(islice(trace(d.term, driver, fuel, collect), steps))


def transcript(entry: CorpusEntry, recs: list[StepRecord]) -> list[str]:
    """The plain CLI transcript of a run."""
    from lratt.cli import render

    return [render(r, entry.reactive) for r in recs]


def output_type(a: Type, record: StepRecord) -> Type:
    """The type of the value an entry of type ``a`` emits at ``record``'s step."""
    assert isinstance(a, Box)
    body = a.body.res if isinstance(a.body, Fun) else a.body
    elem = match_stream(body)
    if elem is not None:
        return elem
    fair = match_fair(body)
    if fair is not None:
        return Sum(*fair)
    assert isinstance(body, Until)
    return body.right if record.halted else body.left


def modes_live(modes: list[int], window: int) -> bool:
    """Every ``window`` consecutive modes contain both 1 and 2."""
    for i in range(len(modes) - window + 1):
        chunk = modes[i : i + window]
        if 1 not in chunk or 2 not in chunk:
            return False
    return True


@dataclass
class EntryResult:
    name: str
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class Report:
    results: list[EntryResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            out.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
            out.extend(f"    {f}" for f in r.failures)
        return out


def check_entry(entry: CorpusEntry, steps: Optional[int] = None, collect: bool = True) -> EntryResult:
    """Check one entry against its expectation; ``steps`` caps the property runs."""
    res = EntryResult(entry.name)
    fail = res.failures.append
    if not entry.well_typed:
        err = typing_error(entry)
        if err is None:
            fail("expected a type error, but the file checks")
        elif err.kind.value != entry.error or err.decl != entry.decl:
            fail(f"expected {entry.error} in {entry.decl}, got {err.kind.value} in {err.decl}")
        return res
    try:
        d = load_decl(entry)
    except TypeCheckError as e:
        fail(f"type error: {e}")
        return res
    if entry.type is not None and d.type != parse_type(entry.type):
        fail(f"declared type {d.type} differs from manifest type {entry.type}")
    driver, reactive = driver_for(d.type)
    if driver.value != entry.driver or reactive != entry.reactive:
        fail(f"machine {driver.value} (reactive={reactive}) differs from manifest")
        return res
    try:
        if entry.golden is not None:
            _check_golden(entry, fail)
        budget = entry.steps if steps is None else min(steps, entry.steps)
        if budget:
            recs = records(entry, budget, collect=collect)
            _check_properties(entry, recs, budget, fail)
    except EvalError as e:
        fail(f"runtime failure: {e}")
    return res


def _check_golden(entry: CorpusEntry, fail: Callable[[str], None]) -> None:
    expected = (GOLDEN_DIR / entry.golden).read_text(encoding="utf-8").splitlines()
    inputs = golden_inputs(entry) if entry.reactive else None
    got = transcript(entry, records(entry, len(expected), inputs))
    if got != expected:
        for i, (a, b) in enumerate(zip(expected, got), start=1):
            if a != b:
                fail(f"golden {entry.golden} line {i}: expected {a!r}, got {b!r}")
                return
        fail(f"golden {entry.golden}: expected {len(expected)} lines, got {len(got)}")


def _check_properties(entry: CorpusEntry, recs: list[StepRecord], budget: int, fail: Callable[[str], None]) -> None:
    if entry.heap_bound is not None:
        worst = max((r.heap_size for r in recs), default=0)
        if worst > entry.heap_bound:
            step = next(r.step for r in recs if r.heap_size > entry.heap_bound)
            fail(f"heap grew to {worst} bindings (first over the bound {entry.heap_bound} at step {step})")
    d = load_decl(entry)
    for r in recs:
        v = r.output
        if v is None or not v.is_value or v.free_vars or locations(v) or not has_type((), v, output_type(d.type, r)):
            fail(f"step {r.step} output {v} is not a closed, location-free value of the output type")
            break
    if entry.halt_step is not None:
        halted = [r.step for r in recs if r.halted]
        if halted != [entry.halt_step]:
            fail(f"expected HALT at step {entry.halt_step}, got {halted or 'no HALT'} within {budget} steps")
    if entry.window is not None:
        modes = [r.mode for r in recs[: entry.window_steps]]
        if not modes_live(modes, entry.window):
            fail(f"some window of {entry.window} steps shows only one mode")
    if entry.stream_of is not None:
        _check_run_fair(entry, recs, fail)


def _check_run_fair(entry: CorpusEntry, recs: list[StepRecord], fail: Callable[[str], None]) -> None:
    stream = find_entry(entry.stream_of)
    n = min(len(recs), 200)
    fair_values = [print_value(r.output) for r in recs[:n]]
    stream_values = [print_value(r.output) for r in records(stream, n)]
    if fair_values != stream_values:
        fail(f"runFair conversion {stream.name} disagrees with the fair run")


def find_entry(name: str, corpus: Optional[list[CorpusEntry]] = None) -> CorpusEntry:
    for e in corpus or build_corpus():
        if e.name == name:
            return e
    raise KeyError(name)


def run_corpus(filter: Optional[Callable[[CorpusEntry], bool]] = None, steps: Optional[int] = None,
               collect: bool = True) -> Report:
    """Check every entry (or those ``filter`` keeps); ``collect=False`` disables garbage collection."""
    corpus = build_corpus()
    chosen = [e for e in corpus if filter is None or filter(e)]
    return Report([check_entry(e, steps, collect) for e in chosen])
