"""State-merging DFA induction (red/blue, evidence-driven scoring).

Builds the augmented prefix tree acceptor over the examples, repeatedly
merges the best-scoring (red, blue) state pair with deterministic folding,
and promotes blue states that clash with every red state.  The resulting
automaton treats unlabeled states as accepting: anything not contradicted
by a negative example counts as positive.  A state-elimination pass turns
the automaton back into a regex for the synthesis harness.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import rx
from .examples import ExamplePair
from .rx import Alphabet, Concat, Literal, Regex, Star, Union


class ConflictError(Exception):
    """Some string appears in both the positive and the negative set."""


class Label(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNKNOWN = "unknown"


@dataclass
class Apta:
    """Prefix tree acceptor: one state per distinct prefix of the examples."""

    trans: dict[int, dict[str, int]]
    labels: list[Label]
    root: int = 0

    @property
    def n_states(self) -> int:
        return len(self.labels)


def build_apta(pair: ExamplePair) -> Apta:
    trans: dict[int, dict[str, int]] = {0: {}}
    labels = [Label.UNKNOWN]

    def insert(s: str, label: Label):
        state = 0
        for c in s:
            nxt = trans[state].get(c)
            if nxt is None:
                nxt = len(labels)
                trans[state][c] = nxt
                trans[nxt] = {}
                labels.append(Label.UNKNOWN)
            state = nxt
        if labels[state] not in (Label.UNKNOWN, label):
            raise ConflictError(f"{s!r} is both positive and negative")
        labels[state] = label

    for s in sorted(pair.positives):
        insert(s, Label.ACCEPT)
    for s in sorted(pair.negatives):
        insert(s, Label.REJECT)
    return Apta(trans, labels)


@dataclass
class Dfa:
    """Possibly-partial DFA; a missing transition rejects."""

    alphabet: Alphabet
    start: int
    accepting: frozenset[int]
    trans: dict[int, dict[str, int]]

    @property
    def n_states(self) -> int:
        return len(self.trans)

    def accepts(self, s: str) -> bool:
        state = self.start
        for c in s:
            nxt = self.trans.get(state, {}).get(c)
            if nxt is None:
                return False
            state = nxt
        return state in self.accepting

    def export_text(self) -> str:
        lines = [f"{src} {c} {dst}"
                 for src in sorted(self.trans)
                 for c, dst in sorted(self.trans[src].items())]
        lines.append("accept: " + " ".join(str(q) for q in sorted(self.accepting)))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Red/blue merging


def _merge(trans: dict[int, dict[str, int]], labels: list[Label],
           red: int, blue: int) -> int | None:
    """Merge blue into red in place; agreement score, or None on a clash."""
    for src in trans:
        for c, dst in trans[src].items():
            if dst == blue:
                trans[src][c] = red
    score = 0

    def fold(r: int, b: int) -> bool:
        nonlocal score
        lb = labels[b]
        if lb is not Label.UNKNOWN:
            if labels[r] is Label.UNKNOWN:
                labels[r] = lb
            elif labels[r] is lb:
                score += 1
            else:
                return False
        for c, child in sorted(trans.get(b, {}).items()):
            existing = trans.setdefault(r, {}).get(c)
            if existing is None:
                trans[r][c] = child
            elif not fold(existing, child):
                return False
        return True

    return score if fold(red, blue) else None


def _reachable(trans: dict[int, dict[str, int]], root: int) -> list[int]:
    seen = [root]
    seen_set = {root}
    i = 0
    while i < len(seen):
        state = seen[i]
        i += 1
        for c in sorted(trans.get(state, {})):
            dst = trans[state][c]
            if dst not in seen_set:
                seen_set.add(dst)
                seen.append(dst)
    return seen


def run_bluefringe(pair: ExamplePair, debug_check: bool = False) -> Dfa:
    """Induce a DFA consistent with the pair by red/blue state merging."""
    apta = build_apta(pair)
    trans = {s: dict(edges) for s, edges in apta.trans.items()}
    labels = list(apta.labels)
    red: list[int] = [apta.root]

    while True:
        red_set = set(red)
        blues = sorted({dst for r in red for dst in trans[r].values()
                        if dst not in red_set})
        if not blues:
            break
        best: tuple[int, int, int] | None = None  # (-score, red, blue)
        promoted = None
        for b in blues:
            compatible_somewhere = False
            for r in sorted(red):
                trial_trans = {s: dict(e) for s, e in trans.items()}
                trial_labels = list(labels)
                score = _merge(trial_trans, trial_labels, r, b)
                if score is None:
                    continue
                compatible_somewhere = True
                cand = (-score, r, b)
                if best is None or cand < best:
                    best = cand
            if not compatible_somewhere:
                promoted = b
                break
        if promoted is not None:
            red.append(promoted)
            continue
        assert best is not None
        _, r, b = best
        result = _merge(trans, labels, r, b)
        assert result is not None
        if debug_check:
            _assert_consistent(trans, labels, pair)

    reachable = _reachable(trans, apta.root)
    renum = {old: new for new, old in enumerate(reachable)}
    dfa_trans = {renum[s]: {c: renum[d] for c, d in trans[s].items()}
                 for s in reachable}
    accepting = frozenset(renum[s] for s in reachable
                          if labels[s] is not Label.REJECT)
    return Dfa(pair.alphabet, renum[apta.root], accepting, dfa_trans)


def synthesize(pair: ExamplePair, budget=None,
               neg_prefix: Regex | None = None) -> Regex | None:
    """Engine-protocol wrapper: induce a DFA and convert it to a regex.

    Merging has no tunable budget (it always terminates quickly at this
    scale); `budget` is accepted for interface parity.  The single
    candidate is dropped when a neg_prefix check fails, since state
    merging cannot search for alternatives.
    """
    if not pair.positives:
        raise ValueError("positives must be non-empty")
    candidate = dfa_to_regex(run_bluefringe(pair))
    if neg_prefix is not None:
        checked = rx.simplify(Concat(neg_prefix, candidate))
        if any(rx.matches(checked, n) for n in pair.negatives):
            return None
    return candidate


def _assert_consistent(trans, labels, pair: ExamplePair):
    def final_label(s: str) -> Label:
        state = 0
        for c in s:
            state = trans[state][c]
        return labels[state]

    for p in pair.positives:
        assert final_label(p) is Label.ACCEPT, f"positive {p!r} lost its label"
    for n in pair.negatives:
        assert final_label(n) is Label.REJECT, f"negative {n!r} lost its label"


# ---------------------------------------------------------------------------
# Regex <-> DFA bridges


def regex_to_dfa(r: Regex, alphabet: Alphabet) -> Dfa:
    """Determinise the match automaton into an explicit (partial) DFA."""
    m = rx._compiled(r)
    start_key = -1
    ids: dict[int, int] = {start_key: 0}
    trans: dict[int, dict[str, int]] = {0: {}}
    accepting = {0} if m.nullable else set()
    queue = [start_key]
    while queue:
        key = queue.pop()
        src = ids[key]
        for c in alphabet.symbols:
            if key == start_key:
                mask = m.first_mask & (m.sym_mask.get(c, 0) | m.wild_mask)
            else:
                mask = m._step(key, c)
            if not mask:
                continue
            if mask not in ids:
                ids[mask] = len(ids)
                trans[ids[mask]] = {}
                if mask & m.last_mask:
                    accepting.add(ids[mask])
                queue.append(mask)
            trans[src][c] = ids[mask]
    return Dfa(alphabet, 0, frozenset(accepting), trans)


def complete_dfa(d: Dfa) -> Dfa:
    """Total version of d: missing transitions go to an explicit sink."""
    sink = d.n_states
    trans = {s: dict(e) for s, e in d.trans.items()}
    need_sink = False
    for s in list(trans):
        for c in d.alphabet.symbols:
            if c not in trans[s]:
                trans[s][c] = sink
                need_sink = True
    if need_sink:
        trans[sink] = {c: sink for c in d.alphabet.symbols}
    return Dfa(d.alphabet, d.start, d.accepting, trans)


def complement_dfa(d: Dfa) -> Dfa:
    total = complete_dfa(d)
    accepting = frozenset(s for s in total.trans if s not in total.accepting)
    return Dfa(d.alphabet, total.start, accepting, total.trans)


def dfa_equal(a: Dfa, b: Dfa) -> bool:
    """Exact language equality by product reachability; None is a dead state."""
    symbols = sorted(set(a.alphabet.symbols) | set(b.alphabet.symbols))

    def is_acc(d: Dfa, s: int | None) -> bool:
        return s is not None and s in d.accepting

    seen = {(a.start, b.start)}
    queue = [(a.start, b.start)]
    while queue:
        sa, sb = queue.pop()
        if is_acc(a, sa) != is_acc(b, sb):
            return False
        for c in symbols:
            na = a.trans.get(sa, {}).get(c) if sa is not None else None
            nb = b.trans.get(sb, {}).get(c) if sb is not None else None
            if (na, nb) == (None, None):
                continue
            if (na, nb) not in seen:
                seen.add((na, nb))
                queue.append((na, nb))
    return True


def dfa_to_regex(d: Dfa) -> Regex:
    """Convert by state elimination, removing low-degree states first."""
    START, FINAL = -1, -2
    edges: dict[tuple[int, int], Regex] = {(START, d.start): rx.EPSILON}
    for s, by_sym in d.trans.items():
        for c, t in by_sym.items():
            key = (s, t)
            lit = Literal(c)
            edges[key] = Union(edges[key], lit) if key in edges else lit
    for q in d.accepting:
        key = (q, FINAL)
        edges[key] = Union(edges[key], rx.EPSILON) if key in edges else rx.EPSILON

    internal = set(d.trans)
    while internal:
        def degree(q: int) -> tuple[int, int]:
            inc = sum(1 for (i, j) in edges if j == q and i != q)
            out = sum(1 for (i, j) in edges if i == q and j != q)
            return (inc * out, q)

        q = min(internal, key=degree)
        internal.discard(q)
        loop = edges.pop((q, q), None)
        loop_star = rx.simplify(Star(loop)) if loop is not None else None
        into = [(i, r) for (i, j), r in edges.items() if j == q]
        outof = [(j, r) for (i, j), r in edges.items() if i == q]
        for i, _ in into:
            del edges[(i, q)]
        for j, _ in outof:
            del edges[(q, j)]
        for i, rin in into:
            for j, rout in outof:
                path = rin if loop_star is None else Concat(rin, loop_star)
                path = rx.simplify(Concat(path, rout))
                key = (i, j)
                edges[key] = rx.simplify(Union(edges[key], path)) if key in edges else path

    return rx.simplify(edges.get((START, FINAL), rx.EMPTY))
