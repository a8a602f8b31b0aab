"""Best-first enumerative regex synthesis with approximation pruning.

Search states are regex templates containing Hole placeholders, explored
in order of weighted size.  A template is dropped when its most permissive
completion (holes -> .*) misses a positive or its most restrictive
completion (holes -> empty language) hits a negative; both bounds follow
from the monotonicity of the regex operators.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass

from . import rx
from .examples import ExamplePair
from .rx import (
    Alphabet, Concat, Hole, Literal, Question, Regex, Star, Union, Wildcard,
)

# wildcard carries a surcharge so concrete symbols win at equal structure
_WILDCARD_COST = 2


def cost(r: Regex) -> int:
    """Weighted template size; the search's priority."""
    kind = type(r)
    if kind is Union or kind is Concat:
        return 1 + cost(r.left) + cost(r.right)
    if kind is Star or kind is Question:
        return 1 + cost(r.inner)
    if kind is Wildcard:
        return _WILDCARD_COST
    return 1  # literal, epsilon, empty, hole


def _count_holes(r: Regex) -> int:
    kind = type(r)
    if kind is Union or kind is Concat:
        return _count_holes(r.left) + _count_holes(r.right)
    if kind is Star or kind is Question:
        return _count_holes(r.inner)
    return 1 if kind is Hole else 0


@dataclass(frozen=True)
class SearchState:
    template: Regex
    cost: int
    holes: int = 0

    @classmethod
    def of(cls, template: Regex) -> "SearchState":
        return cls(template, cost(template), _count_holes(template))


@dataclass(frozen=True)
class SynthesisBudget:
    timeout: float = 3.0
    max_states: int = 2_000_000

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


def canonical_key(template: Regex) -> str:
    # holes all print as @hole, so ids do not split equivalent templates
    return rx.to_text(template)


def _leftmost_hole_spine(r: Regex) -> list[tuple[Regex, int]] | None:
    """Ancestor chain (node, child slot) down to the leftmost hole.

    Slot 0/1 are the left/right children of binary nodes; 0 is the single
    child of star/question.  Returns None when the template is complete.
    """
    path: list[tuple[Regex, int]] = []
    node = r
    while True:
        kind = type(node)
        if kind is Hole:
            return path
        if kind is Union or kind is Concat:
            if _count_holes(node.left):
                path.append((node, 0))
                node = node.left
            elif _count_holes(node.right):
                path.append((node, 1))
                node = node.right
            else:
                return None
        elif kind is Star or kind is Question:
            if not _count_holes(node.inner):
                return None
            path.append((node, 0))
            node = node.inner
        else:
            return None


def _rebuild(path: list[tuple[Regex, int]], piece: Regex) -> tuple[Regex, bool]:
    """Replace the spine target with `piece`, re-normalising on the way up.

    Off-spine subtrees are already simplified, so applying the local
    rewrite at each rebuilt level reproduces a full simplify.  The flag
    reports whether any rewrite fired (costs shift only when one does).
    """
    clean = True
    for node, slot in reversed(path):
        kind = type(node)
        if kind is Union:
            piece = Union(piece, node.right) if slot == 0 else Union(node.left, piece)
        elif kind is Concat:
            piece = Concat(piece, node.right) if slot == 0 else Concat(node.left, piece)
        elif kind is Star:
            piece = Star(piece)
        else:
            piece = Question(piece)
        fixed = rx._local(piece)
        if fixed is not piece:
            clean = False
            piece = fixed
    return piece, clean


def expand(state: SearchState, alphabet: Alphabet,
           seen: set[str] | None = None,
           ids: itertools.count | None = None) -> list[SearchState]:
    """Successor states filling the leftmost hole.

    The hole becomes each alphabet symbol, the wildcard, epsilon, or one of
    the four operator shells over fresh holes.  Successors are simplified;
    those whose canonical form is already in `seen` are dropped (and new
    forms are added to `seen`).
    """
    path = _leftmost_hole_spine(state.template)
    if path is None:
        raise ValueError("cannot expand a template without holes")
    if ids is None:
        ids = itertools.count(1)
    fills: list[tuple[Regex, int, int]] = [(Literal(a), 0, 1) for a in alphabet.symbols]
    fills.append((rx.WILDCARD, 0, _WILDCARD_COST))
    fills.append((rx.EPSILON, 0, 1))
    fills.append((Union(Hole(next(ids)), Hole(next(ids))), 2, 3))
    fills.append((Concat(Hole(next(ids)), Hole(next(ids))), 2, 3))
    fills.append((Star(Hole(next(ids))), 1, 2))
    fills.append((Question(Hole(next(ids))), 1, 2))
    out = []
    base_holes = state.holes - 1
    base_cost = state.cost - 1  # minus the hole being filled
    for filler, added, filler_cost in fills:
        template, clean = _rebuild(path, filler)
        if seen is not None:
            key = canonical_key(template)
            if key in seen:
                continue
            seen.add(key)
        # no rewrite rule can drop a hole (ids make holed subtrees unequal),
        # so the count updates incrementally; costs do too on clean rebuilds
        new_cost = base_cost + filler_cost if clean else cost(template)
        out.append(SearchState(template, new_cost, base_holes + added))
    return out


def _holes_to(template: Regex, replacement: Regex) -> Regex:
    def go(node: Regex) -> Regex:
        kind = type(node)
        if kind is Hole:
            return replacement
        if kind is Union:
            return rx._local(Union(go(node.left), go(node.right)))
        if kind is Concat:
            return rx._local(Concat(go(node.left), go(node.right)))
        if kind is Star:
            return rx._local(Star(go(node.inner)))
        if kind is Question:
            return rx._local(Question(go(node.inner)))
        return node

    return go(template)


def prune_overapprox(state: SearchState, positives) -> bool:
    """True when no completion can match some positive."""
    upper = _holes_to(state.template, _STAR_WILD)
    if type(upper) is Star and type(upper.inner) is Wildcard:
        return False
    run = rx._compiled(upper).run
    return not all(run(p) for p in positives)


def prune_underapprox(state: SearchState, negatives,
                      prefix: Regex | None = None) -> bool:
    """True when every completion must match some negative.

    With a prefix, the bound is taken on prefix . template, matching the
    prefix-conditioned acceptance the framework uses for final parts.
    """
    lower = _holes_to(state.template, rx.EMPTY)
    if type(lower) is rx.Empty:
        return False
    if prefix is not None:
        lower = rx.simplify(Concat(prefix, lower))
    run = rx._compiled(lower).run
    return any(run(n) for n in negatives)


_STAR_WILD = Star(rx.WILDCARD)


def synthesize(pair: ExamplePair, budget: SynthesisBudget,
               neg_prefix: Regex | None = None,
               pop_costs: list[int] | None = None,
               pruning: bool = True) -> Regex | None:
    """Minimal-cost regex consistent with the example pair, or None.

    None means the budget ran out (or pruning exhausted the space).  With
    `neg_prefix` set, a candidate R is accepted only if neg_prefix . R
    rejects every negative, instead of R alone.  `pruning=False` disables
    both approximation pruners (slower, same answers; used by tests).
    """
    positives = sorted(pair.positives)
    negatives = sorted(pair.negatives)
    deadline = time.monotonic() + budget.timeout
    ids = itertools.count(1)
    root = SearchState.of(Hole(0))
    heap: list[tuple[int, int, SearchState]] = [(root.cost, 0, root)]
    seen = {canonical_key(root.template)}
    tie = itertools.count(1)
    popped = 0

    def accepts(r: Regex) -> bool:
        run = rx._compiled(r).run
        if not all(run(p) for p in positives):
            return False
        if neg_prefix is not None:
            run = rx._compiled(rx.simplify(Concat(neg_prefix, r))).run
        return not any(run(n) for n in negatives)

    while heap:
        if time.monotonic() > deadline:
            return None
        popped += 1
        if popped > budget.max_states:
            return None
        key, _, state = heapq.heappop(heap)
        if pop_costs is not None:
            pop_costs.append(key)
        if state.holes == 0:
            if accepts(state.template):
                return state.template
            continue
        if pruning and prune_overapprox(state, positives):
            continue
        if pruning and prune_underapprox(state, negatives, neg_prefix):
            continue
        for succ in expand(state, pair.alphabet, seen, ids):
            # simplification can shrink a successor below its parent; such
            # states are always dead ends recreated around a pruned path,
            # so clamping keeps the frontier monotone without losing the
            # cheapest consistent answer
            heapq.heappush(heap, (max(key, succ.cost), next(tie), succ))
    return None
