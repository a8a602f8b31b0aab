"""Example generation and preprocessing.

Positive strings are sampled by a seeded random walk over the target AST,
negatives by perturbing either the positives (symbol level) or the target
itself (regex level), and every generated example is re-verified with the
match engine before it is returned.  Ground-truth split labels assign each
symbol of a positive string to the top-level concatenation factor that
generated it, with 0 reserved for wildcard-shaped factors.
"""

from __future__ import annotations

import math
import random
import re as stdlib_re
import string as string_mod
from dataclasses import dataclass, field

from . import rx
from .rx import Alphabet, Concat, Literal, Question, Regex, Star, Union, Wildcard


class GenerationError(Exception):
    pass


class InsufficientLanguageError(GenerationError):
    """The target language has fewer distinct strings than requested."""


class GenerationBudgetError(GenerationError):
    """Could not produce the requested examples within the attempt budget."""


class InvalidLabelingError(Exception):
    pass


class PartitionError(Exception):
    pass


# Labels are single characters: '0'..'9' then 'a'..'z' for parts >= 10.
_LABEL_CHARS = string_mod.digits + string_mod.ascii_lowercase
MAX_PARTS = len(_LABEL_CHARS) - 1  # nonzero labels only


def label_char(value: int) -> str:
    if not 0 <= value <= MAX_PARTS:
        raise InvalidLabelingError(f"label value {value} out of range")
    return _LABEL_CHARS[value]


def label_value(char: str) -> int:
    idx = _LABEL_CHARS.find(char)
    if idx < 0:
        raise InvalidLabelingError(f"invalid label character {char!r}")
    return idx


@dataclass(frozen=True)
class ExamplePair:
    """Positive and negative string sets over a shared alphabet."""

    positives: frozenset[str]
    negatives: frozenset[str]
    alphabet: Alphabet

    @classmethod
    def of(cls, positives, negatives, alphabet: Alphabet) -> "ExamplePair":
        return cls(frozenset(positives), frozenset(negatives), alphabet)


@dataclass(frozen=True)
class SplitLabeling:
    """Per-symbol part assignment for one positive string.

    Nonzero labels mark the part that generated each symbol and must form
    single runs in strictly increasing order; 0 marks wildcard symbols.
    """

    string: str
    labels: str

    def __post_init__(self):
        if len(self.labels) != len(self.string):
            raise InvalidLabelingError(
                f"labels {self.labels!r} do not align with string {self.string!r}")
        seen_done: set[int] = set()
        last = 0
        prev = None
        for c in self.labels:
            v = label_value(c)
            if v != prev and prev not in (None, 0):
                seen_done.add(prev)
            if v != 0 and v != prev:
                if v in seen_done:
                    raise InvalidLabelingError(
                        f"label {c!r} occurs in more than one run in {self.labels!r}")
                if v <= last:
                    raise InvalidLabelingError(
                        f"label runs out of order in {self.labels!r}")
                last = v
            prev = v

    @property
    def max_part(self) -> int:
        return max((label_value(c) for c in self.labels), default=0)

    def run_of(self, part: int) -> str:
        """Substring labeled with the given nonzero part (may be empty)."""
        want = label_char(part)
        return "".join(ch for ch, lc in zip(self.string, self.labels) if lc == want)


@dataclass
class RawRegexRecord:
    """Outcome of preprocessing one raw practical regex."""

    source_text: str
    simplified: Regex | None = None
    rejection: str | None = None
    substitution_table: dict[str, str] = field(default_factory=dict)
    alphabet: Alphabet | None = None
    widened: bool = False  # a counted quantifier was widened to *

    @property
    def accepted(self) -> bool:
        return self.simplified is not None


# ---------------------------------------------------------------------------
# Positive generation


def _sample(node: Regex, budget: int, rng: random.Random, alphabet: Alphabet) -> str | None:
    """One random walk over the AST; None when the budget cannot be met."""
    if isinstance(node, rx.Empty):
        return None
    if isinstance(node, rx.Epsilon):
        return ""
    if isinstance(node, Literal):
        return node.symbol if budget >= 1 else None
    if isinstance(node, Wildcard):
        return rng.choice(alphabet.symbols) if budget >= 1 else None
    if isinstance(node, Union):
        first, second = (node.left, node.right) if rng.random() < 0.5 else (node.right, node.left)
        out = _sample(first, budget, rng, alphabet)
        if out is None:
            out = _sample(second, budget, rng, alphabet)
        return out
    if isinstance(node, Concat):
        left = _sample(node.left, budget, rng, alphabet)
        if left is None:
            return None
        right = _sample(node.right, budget - len(left), rng, alphabet)
        if right is None:
            return None
        return left + right
    if isinstance(node, Star):
        # geometric repetition count (p = 0.5), truncated by the budget
        out = ""
        for _ in range(2 * budget + 8):
            if rng.random() >= 0.5:
                break
            piece = _sample(node.inner, budget - len(out), rng, alphabet)
            if piece is None:
                break
            out += piece
        return out
    if isinstance(node, Question):
        if rng.random() < 0.5:
            piece = _sample(node.inner, budget, rng, alphabet)
            if piece is not None:
                return piece
        return ""
    if isinstance(node, rx.Hole):
        raise rx.IncompleteRegexError("cannot sample from a regex containing holes")
    raise TypeError(f"unknown node {node!r}")


def gen_positives(r: Regex, count: int, max_len: int, seed: int,
                  alphabet: Alphabet) -> list[str]:
    """`count` distinct members of L(r) with length <= max_len.

    Deterministic in the seed.  Raises InsufficientLanguageError when the
    language itself is too small, GenerationBudgetError when sampling and
    the deterministic fallback both give out.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if rx.count_language(r, max_len, alphabet, limit=count) < count:
        raise InsufficientLanguageError(
            f"{rx.to_text(r)} has fewer than {count} strings of length <= {max_len}")
    rng = random.Random(seed)
    found: list[str] = []
    seen: set[str] = set()
    attempts = max(200, count * 60)
    for _ in range(attempts):
        s = _sample(r, max_len, rng, alphabet)
        if s is None or s in seen or len(s) > max_len:
            continue
        assert rx.matches(r, s), f"sampler produced non-member {s!r} for {rx.to_text(r)}"
        seen.add(s)
        found.append(s)
        if len(found) == count:
            return found
    # deterministic completion: shortlex scan of the language
    for s in _shortlex(r, max_len, alphabet, limit_nodes=200_000):
        if s not in seen:
            seen.add(s)
            found.append(s)
            if len(found) == count:
                return found
    raise GenerationBudgetError(
        f"could not collect {count} strings from {rx.to_text(r)}")


def _shortlex(r: Regex, max_len: int, alphabet: Alphabet, limit_nodes: int):
    """Yield members of L(r) up to max_len in shortlex order (bounded scan)."""
    if rx.matches(r, ""):
        yield ""
    frontier = [""]
    visited = 0
    for _ in range(max_len):
        new = []
        for prefix in frontier:
            for c in alphabet.symbols:
                visited += 1
                if visited > limit_nodes:
                    return
                s = prefix + c
                # keep prefixes alive only while some completion can match
                if _prefix_alive(r, s):
                    new.append(s)
                    if rx.matches(r, s):
                        yield s
        frontier = new


def _prefix_alive(r: Regex, prefix: str) -> bool:
    m = rx._compiled(r)
    if not prefix:
        return True
    allowed = m.sym_mask.get(prefix[0], 0) | m.wild_mask
    cur = m.first_mask & allowed
    for c in prefix[1:]:
        if not cur:
            return False
        cur = m._step(cur, c)
    return bool(cur)


# ---------------------------------------------------------------------------
# Negative generation


def gen_negatives_symbol_perturb(r: Regex, positives, count: int, seed: int,
                                 alphabet: Alphabet) -> list[str]:
    """Negatives made by substituting symbols inside positive strings.

    Each candidate flips 1..ceil(|s|/2) positions of a random positive to
    different alphabet symbols and is kept only if the match engine
    rejects it and it is distinct from every positive.
    """
    if not positives:
        raise ValueError("positives must be non-empty")
    pool = sorted(s for s in positives if s)
    rng = random.Random(seed)
    found: list[str] = []
    seen: set[str] = set()
    pos_set = set(positives)
    attempts = max(400, count * 80)
    for _ in range(attempts):
        if not pool or len(alphabet) < 2:
            break
        s = rng.choice(pool)
        k = rng.randint(1, math.ceil(len(s) / 2))
        places = rng.sample(range(len(s)), k)
        chars = list(s)
        for i in places:
            options = [c for c in alphabet.symbols if c != chars[i]]
            chars[i] = rng.choice(options)
        cand = "".join(chars)
        if cand in seen or cand in pos_set or rx.matches(r, cand):
            continue
        seen.add(cand)
        found.append(cand)
        if len(found) == count:
            return found
    raise GenerationBudgetError(
        f"could not collect {count} perturbed negatives for {rx.to_text(r)}")


def _replace_node(root: Regex, index: int, make) -> Regex:
    """Rebuild root with the preorder `index`-th node replaced by make(node)."""
    counter = [0]

    def go(node: Regex) -> Regex:
        i = counter[0]
        counter[0] += 1
        if i == index:
            return make(node)
        if isinstance(node, Union):
            return Union(go(node.left), go(node.right))
        if isinstance(node, Concat):
            return Concat(go(node.left), go(node.right))
        if isinstance(node, Star):
            return Star(go(node.inner))
        if isinstance(node, Question):
            return Question(go(node.inner))
        return node

    return go(root)


def _perturb_regex(r: Regex, rng: random.Random, alphabet: Alphabet) -> Regex:
    nodes = list(rx.subtrees(r))
    edit = rng.choice(("substitute", "insert", "delete"))
    if edit == "substitute":
        spots = [i for i, n in enumerate(nodes) if isinstance(n, Literal)]
        if spots and len(alphabet) > 1:
            idx = rng.choice(spots)
            old = nodes[idx].symbol
            new = rng.choice([c for c in alphabet.symbols if c != old])
            return _replace_node(r, idx, lambda _: Literal(new))
        edit = "delete"
    if edit == "insert":
        piece = rng.choice(nodes)
        idx = rng.randrange(len(nodes))
        if rng.random() < 0.5:
            return _replace_node(r, idx, lambda n: Concat(n, piece))
        return _replace_node(r, idx, lambda n: Concat(piece, n))
    idx = rng.randrange(len(nodes))
    return _replace_node(r, idx, lambda _: rx.EPSILON)


def gen_negatives_regex_perturb(r: Regex, count: int, max_len: int, seed: int,
                                alphabet: Alphabet) -> list[str]:
    """Negatives sampled from randomly edited copies of the target regex."""
    rng = random.Random(seed)
    found: list[str] = []
    seen: set[str] = set()
    attempts = max(200, count * 40)
    for _ in range(attempts):
        perturbed = rx.simplify(_perturb_regex(r, rng, alphabet))
        for _ in range(8):
            s = _sample(perturbed, max_len, rng, alphabet)
            if s is None or s in seen or rx.matches(r, s):
                continue
            seen.add(s)
            found.append(s)
            if len(found) == count:
                return found
    raise GenerationBudgetError(
        f"could not collect {count} regex-perturbed negatives for {rx.to_text(r)}")


# ---------------------------------------------------------------------------
# Ground-truth split labels


def _is_wildcard_part(node: Regex) -> bool:
    if isinstance(node, Wildcard):
        return True
    if isinstance(node, (Star, Question)):
        return isinstance(node.inner, Wildcard)
    return False


def split_factors(r: Regex) -> list[tuple[Regex, int]]:
    """Top-level concat factors with their labels (0 for wildcard shapes).

    Non-wildcard factors are numbered consecutively from 1 left to right.
    """
    out = []
    next_part = 1
    for factor in rx.concat_spine(r):
        if _is_wildcard_part(factor):
            out.append((factor, 0))
        else:
            out.append((factor, next_part))
            next_part += 1
    return out


def ground_truth_labels(r: Regex, s: str) -> SplitLabeling:
    """Label each symbol of s with the concat factor of r that produced it.

    The partition is chosen leftmost-longest: earlier factors take the
    longest prefix compatible with a full decomposition.
    """
    factors = split_factors(r)
    dead: set[tuple[int, int]] = set()

    def assign(i: int, pos: int) -> list[int] | None:
        if i == len(factors):
            return [] if pos == len(s) else None
        if (i, pos) in dead:
            return None
        node = factors[i][0]
        for length in range(len(s) - pos, -1, -1):
            if rx.matches(node, s[pos:pos + length]):
                rest = assign(i + 1, pos + length)
                if rest is not None:
                    return [length] + rest
        dead.add((i, pos))
        return None

    lengths = assign(0, 0)
    if lengths is None:
        raise ValueError(
            f"{s!r} does not decompose over {rx.to_text(r)}; is it a member?")
    labels = "".join(label_char(part) * length
                     for (_, part), length in zip(factors, lengths))
    return SplitLabeling(s, labels)


# ---------------------------------------------------------------------------
# Raw regex preprocessing

_BACKREF = stdlib_re.compile(r"\\[1-9]|\\k<")
_LOOKAROUND = stdlib_re.compile(r"\(\?<?[=!]")
_NEGATED_CLASS = stdlib_re.compile(r"\[\^")
_COUNTED = stdlib_re.compile(r"\{\d+(?:,\d*)?\}")

_RESERVED = string_mod.ascii_uppercase
_CONTROL = "!"


def _tokenize_raw(text: str) -> list[tuple[str, str]] | None:
    """(kind, value) tokens for a PCRE-ish regex, or None if unsupported."""
    tokens: list[tuple[str, str]] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\\":
            if i + 1 >= len(text):
                return None
            nxt = text[i + 1]
            if nxt.isalnum():  # \d, \w, \s, \b and friends: not symbol-level
                return None
            tokens.append(("lit", nxt))
            i += 2
            continue
        if c in "()|*?+.":
            tokens.append(("op", c))
            i += 1
            continue
        if c in "[]{}^$":
            return None
        tokens.append(("lit", c))
        i += 1
    return tokens


def _expand_plus(tokens: list[tuple[str, str]]) -> list[tuple[str, str]] | None:
    """Rewrite X+ as XX* at the token level."""
    out: list[tuple[str, str]] = []
    for kind, value in tokens:
        if (kind, value) != ("op", "+"):
            out.append((kind, value))
            continue
        if not out:
            return None
        if out[-1] == ("op", ")"):
            depth = 0
            for j in range(len(out) - 1, -1, -1):
                if out[j] == ("op", ")"):
                    depth += 1
                elif out[j] == ("op", "("):
                    depth -= 1
                    if depth == 0:
                        out.extend(out[j:] + [("op", "*")])
                        break
            else:
                return None
        elif out[-1][0] == "lit" or out[-1] == ("op", "."):
            out.append(out[-1])
            out.append(("op", "*"))
        else:
            return None
    return out


def preprocess_raw(source_text: str) -> RawRegexRecord:
    """Turn a raw practical regex into toolkit syntax, or record why not.

    Unsupported constructs yield a rejection record rather than an
    exception; long literal words become reserved symbols A-Z and other
    non-alphanumeric literals become '!'.
    """
    record = RawRegexRecord(source_text=source_text)
    if _BACKREF.search(source_text):
        record.rejection = "backreference"
        return record
    if _LOOKAROUND.search(source_text):
        record.rejection = "lookaround"
        return record
    if _NEGATED_CLASS.search(source_text):
        record.rejection = "negated-class"
        return record

    text = source_text
    if text.startswith("^"):
        text = text[1:]
    if text.endswith("$") and not text.endswith("\\$"):
        text = text[:-1]
    widened = _COUNTED.search(text) is not None
    text = _COUNTED.sub("*", text)

    tokens = _tokenize_raw(text)
    if tokens is not None:
        tokens = _expand_plus(tokens)
    if tokens is None:
        record.rejection = "unparseable"
        return record

    # carve maximal alphanumeric literal runs into reserved symbols,
    # leaving the last char of a run alone when a quantifier follows it
    taken = {v for k, v in tokens if k == "lit" and v in _RESERVED}
    free = [c for c in _RESERVED if c not in taken]
    table: dict[str, str] = {}
    by_word: dict[str, str] = {}
    controls: list[str] = []
    out: list[str] = []
    i = 0
    while i < len(tokens):
        kind, value = tokens[i]
        if kind == "op":
            out.append(value)
            i += 1
            continue
        if not value.isalnum():
            if value not in controls:
                controls.append(value)
            out.append(_CONTROL)
            i += 1
            continue
        j = i
        while j < len(tokens) and tokens[j][0] == "lit" and tokens[j][1].isalnum():
            j += 1
        if j < len(tokens) and tokens[j][1] in "*?" and tokens[j][0] == "op":
            j -= 1  # the quantifier owns the final char
        if j <= i:
            out.append(value)
            i += 1
            continue
        word = "".join(v for _, v in tokens[i:j])
        if len(word) >= 3:
            if word not in by_word:
                if not free:
                    record.rejection = "too-many-reserved-symbols"
                    return record
                sym = free.pop(0)
                by_word[word] = sym
                table[sym] = word
            out.append(by_word[word])
        else:
            out.append(word)
        i = j

    if controls:
        table[_CONTROL] = "".join(controls)
    rebuilt = "".join(out)
    symbols = sorted({c for c in rebuilt if c not in "()|*?+."})
    if not symbols:
        record.rejection = "unparseable"
        return record
    alphabet = Alphabet.of(symbols)
    try:
        ast = rx.parse(rebuilt, alphabet)
    except rx.RegexError:
        record.rejection = "unparseable"
        return record
    record.simplified = rx.simplify(ast)
    record.substitution_table = table
    record.alphabet = alphabet
    record.widened = widened
    return record
