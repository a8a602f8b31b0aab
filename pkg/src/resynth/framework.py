"""Divide-and-conquer synthesis over split positive examples.

The positives are partitioned by a splitter, each part is solved by a
base engine (or the singleton shortcut), wildcard slots become .* pieces
directly, and the concatenation of everything is the final candidate.
Negative strings are never split; they constrain each part either
directly (minus the strings the part shares with them) or through the
prefix of already-fixed pieces.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Protocol

from . import rx
from . import splitter as sp
from .alpharegex import SynthesisBudget
from .examples import ExamplePair
from .rx import Concat, Regex, Star


class Strategy(enum.Enum):
    INDEPENDENT_SEQUENTIAL = "seq"
    INDEPENDENT_PARALLEL = "par"
    PREFIX_CONDITIONED_ALL = "prefix-all"


class Status(enum.Enum):
    SUCCESS = "success"
    TIMEOUT = "timeout"
    SPLIT_FAILURE = "split-failure"


class SynthEngine(Protocol):
    def __call__(self, pair: ExamplePair, budget: SynthesisBudget,
                 neg_prefix: Regex | None = None) -> Regex | None: ...


@dataclass
class SplitSynthesisResult:
    subregexes: list[Regex | None]
    final: Regex | None
    status: Status
    part_elapsed: list[float] = field(default_factory=list)
    elapsed: float = 0.0


def prefix_conditioned_accept(prefix: Regex, candidate: Regex,
                              part_positives, negatives) -> bool:
    """Accept a part candidate only if prefix . candidate rejects every
    negative (and the candidate matches the whole part)."""
    if not all(rx.matches(candidate, p) for p in part_positives):
        return False
    combined = rx.simplify(Concat(prefix, candidate))
    return not any(rx.matches(combined, n) for n in negatives)


def _singleton_regex(value: str) -> Regex:
    return rx.concat_all([rx.Literal(c) for c in value])


def synthesize_split(pair: ExamplePair, splitter_kind: sp.SplitterKind,
                     engine: SynthEngine, strategy: Strategy,
                     budget: SynthesisBudget,
                     fallback: bool = False) -> SplitSynthesisResult:
    """Run the split pipeline and return the assembled outcome.

    Success requires the final concatenation to match every positive and
    reject every negative; a consistent split that admits no such
    completion reports SPLIT_FAILURE, and running out of time mid-part
    reports TIMEOUT.  With `fallback`, a failed split retries the bare
    engine on the whole example pair with the remaining budget.
    """
    start = time.monotonic()
    deadline = start + budget.timeout
    result = _run_split(pair, splitter_kind, engine, strategy, budget, deadline)
    if fallback and result.status is not Status.SUCCESS:
        remaining = deadline - time.monotonic()
        if remaining > 0:
            rescued = engine(pair, SynthesisBudget(remaining, budget.max_states))
            if rescued is not None and _consistent(rescued, pair):
                result = SplitSynthesisResult([rescued], rescued, Status.SUCCESS,
                                              result.part_elapsed)
    result.elapsed = time.monotonic() - start
    return result


def _consistent(candidate: Regex, pair: ExamplePair) -> bool:
    return all(rx.matches(candidate, p) for p in pair.positives) and \
        not any(rx.matches(candidate, n) for n in pair.negatives)


def _run_split(pair: ExamplePair, splitter_kind, engine, strategy,
               budget: SynthesisBudget, deadline: float) -> SplitSynthesisResult:
    partition = sp.partition_from_labelings(
        sp.labelings_for(splitter_kind, pair.positives))
    n = partition.n_parts
    negatives = set(pair.negatives)
    part_values = [partition.part_values(i) for i in range(1, n + 1)]
    subregexes: list[Regex | None] = [None] * n
    part_elapsed = [0.0] * n

    def solve_part(i: int, neg_prefix: Regex | None,
                   full_negatives: bool) -> Regex | None:
        """Solve part i (0-based); singleton parts skip the engine.

        Prefix-conditioned parts (the last one, or all of them under that
        strategy) are checked against the full negative set; independent
        parts drop the strings they share with it.
        """
        values = part_values[i]
        t0 = time.monotonic()
        try:
            if len(values) == 1:
                return _singleton_regex(next(iter(values)))
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                return None
            part_negatives = negatives if full_negatives else negatives - values
            sub_pair = ExamplePair.of(values, part_negatives, pair.alphabet)
            sub_budget = SynthesisBudget(remaining, budget.max_states)
            return engine(sub_pair, sub_budget, neg_prefix=neg_prefix)
        finally:
            part_elapsed[i] = time.monotonic() - t0

    def prefix_before(i: int) -> Regex | None:
        """Fixed pieces preceding part i (0-based), slots included."""
        pieces: list[Regex] = []
        if partition.wildcard_slots[0]:
            pieces.append(Star(rx.WILDCARD))
        for j in range(i):
            fixed = subregexes[j]
            assert fixed is not None
            pieces.append(fixed)
            if partition.wildcard_slots[j + 1]:
                pieces.append(Star(rx.WILDCARD))
        if not pieces:
            return None
        return rx.simplify(rx.concat_all(pieces))

    if strategy is Strategy.PREFIX_CONDITIONED_ALL:
        for i in range(n):
            subregexes[i] = solve_part(i, prefix_before(i), full_negatives=True)
            if subregexes[i] is None:
                return _failed(subregexes, part_elapsed, deadline)
    else:
        head = range(n - 1)
        if strategy is Strategy.INDEPENDENT_PARALLEL and n > 1:
            with ThreadPoolExecutor(max_workers=min(4, max(1, n - 1))) as pool:
                futures = {i: pool.submit(solve_part, i, None, False) for i in head}
            for i, future in futures.items():
                subregexes[i] = future.result()
        else:
            for i in head:
                subregexes[i] = solve_part(i, None, full_negatives=False)
        if any(subregexes[i] is None for i in head):
            return _failed(subregexes, part_elapsed, deadline)
        if n > 0:
            subregexes[n - 1] = solve_part(n - 1, prefix_before(n - 1),
                                           full_negatives=True)
            if subregexes[n - 1] is None:
                return _failed(subregexes, part_elapsed, deadline)

    pieces: list[Regex] = []
    if partition.wildcard_slots[0]:
        pieces.append(Star(rx.WILDCARD))
    for i in range(n):
        fixed = subregexes[i]
        assert fixed is not None
        pieces.append(fixed)
        if partition.wildcard_slots[i + 1]:
            pieces.append(Star(rx.WILDCARD))
    final = rx.simplify(rx.concat_all(pieces))
    status = Status.SUCCESS if _consistent(final, pair) else Status.SPLIT_FAILURE
    return SplitSynthesisResult(list(subregexes), final, status, part_elapsed)


def _failed(subregexes, part_elapsed, deadline) -> SplitSynthesisResult:
    status = Status.TIMEOUT if time.monotonic() >= deadline else Status.SPLIT_FAILURE
    return SplitSynthesisResult(list(subregexes), None, status, part_elapsed)
