"""Split labelings, partitions, and the pluggable splitters.

A splitter turns the positive set into per-string labelings; the
partition groups the labeled runs into ordered parts P_1..P_S plus
wildcard slots, which is exactly what the divide-and-conquer framework
consumes.  Splitters available here: ground truth (from the target
regex), heuristic run alignment, and predictions loaded from a file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import examples as ex
from . import rx
from .examples import InvalidLabelingError, PartitionError, SplitLabeling
from .rx import Regex


class PredictionError(Exception):
    pass


class MissingPredictionError(PredictionError):
    pass


class PredictionSchemaError(PredictionError):
    pass


@dataclass(frozen=True)
class GroundTruth:
    target: Regex


@dataclass(frozen=True)
class FromFile:
    path: str


@dataclass(frozen=True)
class HeuristicRuns:
    pass


SplitterKind = GroundTruth | FromFile | HeuristicRuns


@dataclass(frozen=True)
class SplitPartition:
    """Ordered parts and wildcard slots extracted from labelings.

    parts[i][k] is the substring string k contributed to part i+1 (may be
    empty); slot_strings[k][j] is what string k dropped into wildcard slot
    j (slot 0 precedes part 1, slot S trails part S).  wildcard_slots[j]
    is set when any string puts symbols into slot j.
    """

    parts: tuple[tuple[str, ...], ...]
    wildcard_slots: tuple[bool, ...]
    slot_strings: tuple[tuple[str, ...], ...]
    source_labelings: tuple[SplitLabeling, ...]

    @property
    def n_parts(self) -> int:
        return len(self.parts)

    def part_values(self, i: int) -> set[str]:
        """Distinct strings of part i (1-based)."""
        return set(self.parts[i - 1])

    def __post_init__(self):
        for k, labeling in enumerate(self.source_labelings):
            pieces = [self.slot_strings[k][0]]
            for i in range(self.n_parts):
                pieces.append(self.parts[i][k])
                pieces.append(self.slot_strings[k][i + 1])
            assert "".join(pieces) == labeling.string, \
                f"partition does not reassemble {labeling.string!r}"


def _runs(labels: str) -> list[tuple[int, int, int]]:
    """Maximal runs as (label value, start, end)."""
    out = []
    start = 0
    for i in range(1, len(labels) + 1):
        if i == len(labels) or labels[i] != labels[start]:
            out.append((ex.label_value(labels[start]), start, i))
            start = i
    return out


def partition_from_labelings(labelings: list[SplitLabeling]) -> SplitPartition:
    """Group labeled runs into parts and attribute 0-runs to slots.

    A 0-run lands in the slot after the nonzero part preceding it; leading
    runs use slot 0 and runs with no nonzero part to their right use the
    final slot.
    """
    if not labelings:
        raise PartitionError("cannot partition an empty labeling list")
    n_parts = max(lab.max_part for lab in labelings)
    parts = [[] for _ in range(n_parts)]
    slot_strings = []
    slots = [False] * (n_parts + 1)
    for lab in labelings:
        by_part = {}
        by_slot = [""] * (n_parts + 1)
        runs = _runs(lab.labels)
        for idx, (value, start, end) in enumerate(runs):
            piece = lab.string[start:end]
            if value != 0:
                by_part[value] = piece
                continue
            followers = [v for v, _, _ in runs[idx + 1:] if v != 0]
            if followers:
                preceding = [v for v, _, _ in runs[:idx] if v != 0]
                slot = preceding[-1] if preceding else 0
            else:
                slot = n_parts
            by_slot[slot] += piece
            slots[slot] = True
        for i in range(1, n_parts + 1):
            parts[i - 1].append(by_part.get(i, ""))
        slot_strings.append(tuple(by_slot))
    return SplitPartition(
        parts=tuple(tuple(p) for p in parts),
        wildcard_slots=tuple(slots),
        slot_strings=tuple(slot_strings),
        source_labelings=tuple(labelings),
    )


def ground_truth_split(target: Regex, positives) -> list[SplitLabeling]:
    """Label each positive by the factor of `target` that generated it."""
    return [ex.ground_truth_labels(target, p) for p in sorted(positives)]


def heuristic_runs_split(positives) -> list[SplitLabeling]:
    """Baseline splitter: align maximal same-symbol runs across strings.

    Run classes come from the lexicographically smallest string; other
    strings greedily match their run symbols against that ordering and
    label anything unalignable 0.
    """
    ordered = sorted(positives)
    if not ordered:
        raise ValueError("positives must be non-empty")
    classes = [sym for sym, _ in _symbol_runs(ordered[0])][:ex.MAX_PARTS]
    out = []
    for s in ordered:
        labels = []
        cursor = 0
        for sym, piece in _symbol_runs(s):
            try:
                found = classes.index(sym, cursor)
            except ValueError:
                labels.append("0" * len(piece))
                continue
            labels.append(ex.label_char(found + 1) * len(piece))
            cursor = found + 1
        out.append(SplitLabeling(s, "".join(labels)))
    return out


def _symbol_runs(s: str) -> list[tuple[str, str]]:
    out = []
    start = 0
    for i in range(1, len(s) + 1):
        if i == len(s) or s[i] != s[start]:
            out.append((s[start], s[start:i]))
            start = i
    return out


# ---------------------------------------------------------------------------
# Prediction files


def repair_labels(labels: str) -> str:
    """Deterministic cleanup of noisy predicted labels.

    A majority vote over each forward window of three positions smooths
    isolated flips (ties keep the original), then a left-to-right sweep
    absorbs any run that repeats or decreases into the current run.
    """
    values = [ex.label_value(c) for c in labels]
    smoothed = []
    for i, v in enumerate(values):
        window = values[i:i + 3]
        best = max(set(window), key=window.count)
        smoothed.append(best if window.count(best) >= 2 else v)
    out = []
    current: int | None = None
    top = 0
    for v in smoothed:
        if v == (current if current is not None else -1):
            out.append(v)
        elif v == 0:
            current = 0
            out.append(0)
        elif v > top:
            current = top = v
            out.append(v)
        else:
            out.append(current if current is not None else 0)
    return "".join(ex.label_char(v) for v in out)


def load_predictions(path: str | Path, positives) -> list[SplitLabeling]:
    """Read {"string","labels"} JSONL records covering every positive.

    Label strings are validated and, when they violate the run invariants,
    repaired with repair_labels before use.
    """
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                s, labels = record["string"], record["labels"]
            except (json.JSONDecodeError, KeyError, TypeError) as err:
                raise PredictionSchemaError(f"{path}:{line_no}: {err}") from err
            if not isinstance(s, str) or not isinstance(labels, str):
                raise PredictionSchemaError(f"{path}:{line_no}: fields must be strings")
            table.setdefault(s, labels)
    out = []
    for p in sorted(positives):
        if p not in table:
            raise MissingPredictionError(f"no prediction for {p!r} in {path}")
        labels = table[p]
        if len(labels) != len(p):
            raise PredictionSchemaError(
                f"labels {labels!r} do not align with string {p!r}")
        try:
            for c in labels:
                ex.label_value(c)
        except InvalidLabelingError as err:
            raise PredictionSchemaError(str(err)) from err
        try:
            out.append(SplitLabeling(p, labels))
        except InvalidLabelingError:
            out.append(SplitLabeling(p, repair_labels(labels)))
    return out


def labelings_for(kind: SplitterKind, positives) -> list[SplitLabeling]:
    """Run the chosen splitter over the positive set (sorted order)."""
    if isinstance(kind, GroundTruth):
        return ground_truth_split(kind.target, positives)
    if isinstance(kind, FromFile):
        return load_predictions(kind.path, positives)
    if isinstance(kind, HeuristicRuns):
        return heuristic_runs_split(positives)
    raise TypeError(f"unknown splitter {kind!r}")
