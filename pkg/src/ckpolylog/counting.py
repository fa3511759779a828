"""Point counting: naive search and locus certification run in interleaved rounds."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .loci import LocusReport, assemble_loci, default_prime, disk_reports, symmetrize
from .sunits import OpenIntegerScheme, SUnitPoint, enumerate_points

BUDGET_EXHAUSTED = "budget exhausted"


@dataclass
class CountingState:
    """Resumable driver state; ``round`` indexes the (n, N, radius) schedule."""

    scheme: str
    p: int
    round: int = 0
    n: int = 0
    N: int = 0
    radius: int = 0
    points: list[str] = field(default_factory=list)
    report: dict | None = None
    verdict: bool = False

    def found(self) -> list[Fraction]:
        return [Fraction(x) for x in self.points]

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, d: dict) -> "CountingState":
        return cls(**d)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))

    @classmethod
    def load(cls, path: str | Path) -> "CountingState":
        return cls.from_dict(json.loads(Path(path).read_text()))


def schedule(depth: int, N: int, refinements: int = 2):
    """(n, N, radius) triples: n-major, then precision and radius together."""
    for n in range(1, depth + 1):
        for k in range(refinements):
            yield n, N + 5 * k, 2 + k


def _verdict(report: LocusReport, fns, points: list[Fraction], Z: OpenIntegerScheme, N: int) -> bool:
    if not report.certified:
        return False
    matched = {b.matched for b in report.balls if b.expected == 1}
    if {str(x) for x in points} != matched:
        return False
    for x in points:
        if not Z.is_unit(x) or not Z.is_unit(1 - x):
            return False
        for f in fns:
            slack = 2 if f.is_exact() else 4
            if f.evaluate(x, N).valuation() < N - slack:
                return False
    return True


def count_points(Z: OpenIntegerScheme, depth: int = 2, p: int | None = None, N: int = 15,
                 height_bound: int = 16, budget: float | None = None, max_rounds: int | None = None,
                 refinements: int = 2, checkpoint: str | Path | None = None, jobs: int = 1,
                 state: CountingState | None = None):
    """Return (X(Z) as SUnitPoints or BUDGET_EXHAUSTED, final CountingState).

    Round k searches heights up to height_bound * 2^(n-1) and certifies the
    symmetrised depth-n locus on balls of radius down to p^-radius.  ``budget`` is in
    seconds and ``max_rounds`` counts rounds; either one at zero stops immediately.
    """
    p = p or default_prime(Z)
    state = state or CountingState(str(Z), p)
    start = time.monotonic()
    rounds = list(schedule(depth, N, refinements))
    while state.round < len(rounds):
        if max_rounds is not None and state.round >= max_rounds:
            break
        if budget is not None and time.monotonic() - start >= budget:
            break
        n, NN, radius = rounds[state.round]
        found = {SUnitPoint(x, Z.primes).value for x in state.found()}
        found |= {pt.value for pt in enumerate_points(Z, height_bound * 2 ** (n - 1))}
        points = sorted(found)
        locus = assemble_loci(Z, n, NN, p)
        fns = symmetrize(locus.functions)
        report = disk_reports(fns, p, NN, points, max_depth=radius, jobs=jobs)
        state.n, state.N, state.radius = n, NN, radius
        state.points = [str(x) for x in points]
        state.report = report.to_dict()
        state.verdict = _verdict(report, fns, points, Z, NN)
        state.round += 1
        if checkpoint:
            state.save(checkpoint)
        if state.verdict:
            return [SUnitPoint(x, Z.primes) for x in points], state
    return BUDGET_EXHAUSTED, state
