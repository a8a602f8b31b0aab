"""Independent reference implementations used to check the toolkit.

Everything here is deliberately brute force and shares no code with the
matcher or the engines it validates.
"""

from __future__ import annotations

import random
from functools import lru_cache

from resynth import rx
from resynth.rx import (
    Alphabet, Concat, Empty, Epsilon, Hole, Literal, Question, Regex, Star,
    Union, Wildcard,
)


def set_language(r: Regex, max_len: int, alphabet: Alphabet) -> frozenset[str]:
    """L(r) truncated to strings of length <= max_len, by set semantics."""

    def trunc(strings):
        return frozenset(s for s in strings if len(s) <= max_len)

    if isinstance(r, Empty):
        return frozenset()
    if isinstance(r, Epsilon):
        return frozenset({""})
    if isinstance(r, Literal):
        return frozenset({r.symbol}) if max_len >= 1 else frozenset()
    if isinstance(r, Wildcard):
        return trunc(set(alphabet.symbols))
    if isinstance(r, Union):
        return set_language(r.left, max_len, alphabet) | set_language(r.right, max_len, alphabet)
    if isinstance(r, Concat):
        left = set_language(r.left, max_len, alphabet)
        right = set_language(r.right, max_len, alphabet)
        return trunc({a + b for a in left for b in right})
    if isinstance(r, Question):
        return set_language(r.inner, max_len, alphabet) | {""}
    if isinstance(r, Star):
        inner = set_language(r.inner, max_len, alphabet)
        out = {""}
        frontier = {""}
        while frontier:
            new = trunc({a + b for a in frontier for b in inner}) - out
            out |= new
            frontier = new
        return frozenset(out)
    raise TypeError(f"no set semantics for {r!r}")


def span_match(r: Regex, s: str) -> bool:
    """Membership by recursive span decomposition, memoised.

    Independent of the Glushkov matcher; usable at any alphabet size.
    """

    @lru_cache(maxsize=None)
    def go(node: Regex, lo: int, hi: int) -> bool:
        if isinstance(node, Empty):
            return False
        if isinstance(node, Epsilon):
            return lo == hi
        if isinstance(node, Literal):
            return hi - lo == 1 and s[lo] == node.symbol
        if isinstance(node, Wildcard):
            return hi - lo == 1
        if isinstance(node, Union):
            return go(node.left, lo, hi) or go(node.right, lo, hi)
        if isinstance(node, Concat):
            return any(go(node.left, lo, mid) and go(node.right, mid, hi)
                       for mid in range(lo, hi + 1))
        if isinstance(node, Question):
            return lo == hi or go(node.inner, lo, hi)
        if isinstance(node, Star):
            if lo == hi:
                return True
            return any(go(node.inner, lo, mid) and go(node, mid, hi)
                       for mid in range(lo + 1, hi + 1))
        raise TypeError(f"no span semantics for {node!r}")

    return go(r, 0, len(s))


def random_ast(rng: random.Random, alphabet: Alphabet, max_size: int = 12,
               with_holes: bool = False) -> Regex:
    """Random regex AST within a node budget (uniform-ish over shapes)."""
    kinds = ["literal", "literal", "wildcard", "epsilon", "union", "concat",
             "concat", "star", "question"]
    if with_holes:
        kinds.append("hole")

    def grow(budget: int) -> Regex:
        kind = rng.choice(kinds) if budget >= 3 else rng.choice(kinds[:4])
        if kind == "literal":
            return Literal(rng.choice(alphabet.symbols))
        if kind == "wildcard":
            return rx.WILDCARD
        if kind == "epsilon":
            return rx.EPSILON
        if kind == "hole":
            return Hole(rng.randrange(1 << 20))
        if kind in ("union", "concat"):
            lb = rng.randint(1, budget - 2)
            left, right = grow(lb), grow(budget - 1 - lb)
            return Union(left, right) if kind == "union" else Concat(left, right)
        inner = grow(budget - 1)
        return Star(inner) if kind == "star" else Question(inner)

    return grow(max(1, rng.randint(1, max_size)))


# --- cost-ordered exhaustive enumeration (minimality oracle) ---------------

def node_cost(r: Regex) -> int:
    """Same weighted size the search engine optimises (wildcard costs 2)."""
    if isinstance(r, (Union, Concat)):
        return 1 + node_cost(r.left) + node_cost(r.right)
    if isinstance(r, (Star, Question)):
        return 1 + node_cost(r.inner)
    if isinstance(r, Wildcard):
        return 2
    return 1


def trees_of_cost(alphabet: Alphabet, max_cost: int) -> list[list[Regex]]:
    """by_cost[c] = every complete regex of weighted cost exactly c.

    Exhaustive over the full grammar (literals, epsilon, wildcard, union,
    concat, star, question); independent of the engine's expansion order.
    """
    by_cost: list[list[Regex]] = [[] for _ in range(max_cost + 1)]
    if max_cost >= 1:
        by_cost[1] = [rx.EPSILON] + [Literal(a) for a in alphabet.symbols]
    if max_cost >= 2:
        by_cost[2] = [rx.WILDCARD]
    for c in range(2, max_cost + 1):
        for t in by_cost[c - 1]:
            by_cost[c].append(Star(t))
            by_cost[c].append(Question(t))
        for lc in range(1, c - 1):
            for lt in by_cost[lc]:
                for t in by_cost[c - 1 - lc]:
                    by_cost[c].append(Union(lt, t))
                    by_cost[c].append(Concat(lt, t))
    return by_cost


def min_consistent_cost(alphabet: Alphabet, positives, negatives,
                        max_cost: int) -> int | None:
    """Smallest cost of any consistent complete regex, by exhaustive scan."""
    by_cost = trees_of_cost(alphabet, max_cost)
    for c in range(1, max_cost + 1):
        for t in by_cost[c]:
            if all(rx.matches(t, p) for p in positives) and \
                    not any(rx.matches(t, n) for n in negatives):
                return c
    return None
