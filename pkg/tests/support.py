"""Shared helpers for the test suite: cached corpus runs and independent oracles."""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import count
from pathlib import Path
from typing import Iterator, Optional

from lratt.core import Heap, SingleHeap, Term, numeral
from lratt.corpus import CorpusEntry, build_corpus, records
from lratt.evaluator import derive, empty_ticked
from lratt.machine import StepRecord
from lratt.surface import desugar, parse_term

FULL_STEPS = 10_000

# acceptance criterion number -> (passed, one-line detail), printed at the end of the session
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def report(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@lru_cache(maxsize=None)
def corpus() -> tuple[CorpusEntry, ...]:
    return tuple(build_corpus())


def entry(name: str) -> CorpusEntry:
    for e in corpus():
        if e.name == name:
            return e
    raise KeyError(name)


def well_typed() -> list[CorpusEntry]:
    return [e for e in corpus() if e.well_typed]


def ill_typed() -> list[CorpusEntry]:
    return [e for e in corpus() if not e.well_typed]


@lru_cache(maxsize=None)
def full_run(name: str) -> tuple[StepRecord, ...]:
    """The property run of an entry at its manifest budget, computed once per session."""
    e = entry(name)
    return tuple(records(e, e.steps))


def seeded_inputs(seed: int, n: int, bound: int = 10) -> list[Term]:
    rng = random.Random(seed)
    return [numeral(rng.randrange(bound)) for _ in range(n)]


# independent oracles: plain Python models of what each corpus program computes


def scheduler_modes() -> Iterator[int]:
    """Round m emits once in mode 2, then m + 1 times in mode 1."""
    for m in count(1):
        yield 2
        for _ in range(m + 1):
            yield 1


def first_above(xs: list[int], threshold: int, horizon: int) -> tuple[int, int]:
    """(halting step, output) of a watcher that gives up after ``horizon`` inputs."""
    for i, x in enumerate(xs[:horizon], start=1):
        if x > threshold:
            return i, x
    return horizon + 1, 0


def closed_stream_oracle(name: str, i: int) -> Optional[str]:
    """Expected plain output at step ``i`` (from 1) of a closed stream or fair entry."""
    n = i - 1
    if name == "zeros":
        return "0"
    if name == "nats":
        return str(n)
    if name == "evens":
        return str(2 * n)
    if name == "sucs":
        return str(i)
    if name in ("altEx", "altFairEx", "altFairStream"):
        return "inr 0" if i % 2 == 1 else f"inl {n}"
    if name == "dropEx":
        return f"inl {n}"
    return None


def reactive_oracle(name: str, xs: list[int]) -> Optional[list[str]]:
    """Expected transcript lines of a reactive entry fed ``xs``."""
    if name == "identity":
        return [f"i:{x} o:{x}" for x in xs]
    if name in ("mapsuc", "main"):
        return [f"i:{x} o:{x + 1}" for x in xs]
    if name == "sums":
        acc, out = 0, []
        for x in xs:
            acc += x
            out.append(f"i:{x} o:{acc}")
        return out
    if name == "prev":
        return [f"i:{x} o:{p}" for x, p in zip(xs, [0] + xs)]
    if name == "watch":
        step, v = first_above(xs, 5, 20)
        return [f"i:{x} o:{v if k == step else '()'}" for k, x in enumerate(xs[:step], start=1)]
    if name == "rtimer":
        return [f"i:{x} o:()" for x in xs[:4]]
    if name == "rfair":
        return [f"i:{x} o:inr {x}" if k % 2 == 1 else f"i:{x} o:inl {k - 1}" for k, x in enumerate(xs, start=1)]
    if name == "rsched":
        return [f"i:{x} o:inr {x + 1}" if m == 2 else f"i:{x} o:inl {x}" for x, m in zip(xs, scheduler_modes())]
    return None


# derivation goldens: (golden file, source term, starting store)
GOLDEN = Path(__file__).parent / "golden"
DERIVATION_CASES = [
    ("adv_delay", "adv (delay 1)", "ticked"),
    ("fix_unfold", "unbox (fix s. 0 :: unbox s)", "ticked"),
    ("urec_wait", "urec (wait () (delay (now 5))) {now x -> delay x ; wait a b rec r -> r}", "single"),
]

# the rule skeleton of each hand derivation, premises nested under their conclusion
DERIVATION_SKELETONS = {
    "adv_delay": ("adv", [("delay", []), ("val", [])]),
    "fix_unfold": ("unbox-fix", [
        ("val", []),
        ("into", [("pair", [("val", []), ("unbox-box", [("val", []), ("delay", [])])])]),
    ]),
    "urec_wait": ("urec-wait", [("wait", [("val", []), ("delay", [])]), ("val", [])]),
}


def derivation_for(name: str):
    for case, src, store in DERIVATION_CASES:
        if case == name:
            start = empty_ticked() if store == "ticked" else SingleHeap(Heap(0))
            return derive(desugar(parse_term(src)), start)[2]
    raise KeyError(name)


def skeleton(d) -> tuple:
    return (d.rule, [skeleton(p) for p in d.premises])
