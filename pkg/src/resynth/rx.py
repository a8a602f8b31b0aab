"""Regex AST, concrete syntax, full-match engine, and simplifier.

The AST is the shared currency of the whole toolkit: synthesis engines
enumerate it (with Hole placeholders), the matcher runs it, and the
splitter framework concatenates pieces of it.  Values are immutable;
matching is read-only and safe to call from concurrent tasks.

Concrete syntax: single-character symbols, `.` wildcard, `+` (or `|`)
union, juxtaposition for concatenation, postfix `*` and `?`, parentheses,
and the tokens `@epsilon` / `@empty` for the empty string and the empty
language.  Postfix operators bind tighter than concatenation, which binds
tighter than union.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache


class RegexError(Exception):
    """Base class for toolkit regex errors."""


class RegexSyntaxError(RegexError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class AlphabetError(RegexError):
    """Symbol outside the declared alphabet."""


class IncompleteRegexError(RegexError):
    """Operation requires a complete regex but the AST contains holes."""


class BoundExceededError(RegexError):
    """Enumeration bound too large."""


@dataclass(frozen=True, slots=True)
class Alphabet:
    """Ordered, duplicate-free set of single-character symbols."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise AlphabetError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise AlphabetError("alphabet contains duplicate symbols")
        for sym in self.symbols:
            if len(sym) != 1:
                raise AlphabetError(f"alphabet symbols must be single characters, got {sym!r}")

    @classmethod
    def of(cls, symbols) -> "Alphabet":
        return cls(tuple(symbols))

    def __contains__(self, sym: str) -> bool:
        return sym in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True, slots=True)
class Regex:
    """Abstract base node.  Concrete nodes are the subclasses below."""


@dataclass(frozen=True, slots=True)
class Empty(Regex):
    """The empty language (no strings).  Never appears in final outputs."""


@dataclass(frozen=True, slots=True)
class Epsilon(Regex):
    """The language containing only the empty string."""


@dataclass(frozen=True, slots=True)
class Literal(Regex):
    symbol: str


@dataclass(frozen=True, slots=True)
class Wildcard(Regex):
    """Any single symbol of the alphabet."""


@dataclass(frozen=True, slots=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True, slots=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True, slots=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True, slots=True)
class Question(Regex):
    inner: Regex


@dataclass(frozen=True, slots=True)
class Hole(Regex):
    """Placeholder leaf used by enumerative search templates."""

    id: int = 0


EMPTY = Empty()
EPSILON = Epsilon()
WILDCARD = Wildcard()


def size(r: Regex) -> int:
    """Number of AST nodes."""
    kind = type(r)
    if kind is Union or kind is Concat:
        return 1 + size(r.left) + size(r.right)
    if kind is Star or kind is Question:
        return 1 + size(r.inner)
    return 1


def children(r: Regex) -> tuple[Regex, ...]:
    if isinstance(r, (Union, Concat)):
        return (r.left, r.right)
    if isinstance(r, (Star, Question)):
        return (r.inner,)
    return ()


def subtrees(r: Regex):
    """Yield every subtree of r (preorder, including r itself)."""
    stack = [r]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def is_complete(r: Regex) -> bool:
    return not any(isinstance(n, Hole) for n in subtrees(r))


def literals(r: Regex) -> set[str]:
    return {n.symbol for n in subtrees(r) if isinstance(n, Literal)}


def concat_spine(r: Regex) -> list[Regex]:
    """Flatten the top-level concatenation into its ordered factors."""
    if isinstance(r, Concat):
        return concat_spine(r.left) + concat_spine(r.right)
    return [r]


def concat_all(parts: list[Regex]) -> Regex:
    """Left-nested concatenation of parts; empty list means epsilon."""
    if not parts:
        return EPSILON
    out = parts[0]
    for p in parts[1:]:
        out = Concat(out, p)
    return out


# ---------------------------------------------------------------------------
# Parsing


_UNION_CHARS = ("+", "|")
_TOKENS = {"@epsilon": EPSILON, "@empty": EMPTY}


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def peek(self) -> str | None:
        return self.text[self.pos] if self.pos < len(self.text) else None

    def error(self, msg: str) -> RegexSyntaxError:
        return RegexSyntaxError(msg, self.pos)

    def parse(self) -> Regex:
        r = self.union()
        if self.pos != len(self.text):
            raise self.error(f"unexpected {self.text[self.pos]!r}")
        return r

    def union(self) -> Regex:
        left = self.concat()
        while self.peek() in _UNION_CHARS:
            self.pos += 1
            left = Union(left, self.concat())
        return left

    def concat(self) -> Regex:
        left = self.postfix()
        while True:
            c = self.peek()
            if c is None or c in _UNION_CHARS or c == ")":
                return left
            left = Concat(left, self.postfix())

    def postfix(self) -> Regex:
        r = self.atom()
        while True:
            c = self.peek()
            if c == "*":
                r = Star(r)
            elif c == "?":
                r = Question(r)
            else:
                return r
            self.pos += 1

    def atom(self) -> Regex:
        c = self.peek()
        if c is None:
            raise self.error("unexpected end of input")
        if c == "(":
            self.pos += 1
            r = self.union()
            if self.peek() != ")":
                raise self.error("missing closing parenthesis")
            self.pos += 1
            return r
        if c == "@":
            for token, node in _TOKENS.items():
                if self.text.startswith(token, self.pos):
                    self.pos += len(token)
                    return node
            raise self.error("unknown @-token")
        if c == ".":
            self.pos += 1
            return WILDCARD
        if c in "*?)":
            raise self.error(f"misplaced {c!r}")
        if c not in self.alphabet:
            raise AlphabetError(f"symbol {c!r} at position {self.pos} is not in the alphabet")
        self.pos += 1
        return Literal(c)


def parse(text: str, alphabet: Alphabet) -> Regex:
    """Parse concrete syntax into an AST.

    Raises RegexSyntaxError on malformed input and AlphabetError on
    symbols outside `alphabet`.
    """
    return _Parser(text, alphabet).parse()


# ---------------------------------------------------------------------------
# Printing

# Precedence levels used for minimal parenthesisation.
_LVL_UNION, _LVL_CONCAT, _LVL_POSTFIX, _LVL_ATOM = 0, 1, 2, 3


def _print(r: Regex) -> tuple[str, int]:
    kind = type(r)
    if kind is Literal:
        return r.symbol, _LVL_ATOM
    if kind is Wildcard:
        return ".", _LVL_ATOM
    if kind is Union:
        lt, _ = _print(r.left)
        rt, rl = _print(r.right)
        # parser is left-associative: right operand needs parens if it is
        # itself a union
        if rl <= _LVL_UNION:
            rt = f"({rt})"
        return f"{lt}+{rt}", _LVL_UNION
    if kind is Concat:
        lt, ll = _print(r.left)
        rt, rl = _print(r.right)
        if ll < _LVL_CONCAT:
            lt = f"({lt})"
        if rl <= _LVL_CONCAT:
            rt = f"({rt})"
        return f"{lt}{rt}", _LVL_CONCAT
    if kind is Star or kind is Question:
        it, il = _print(r.inner)
        if il < _LVL_POSTFIX:
            it = f"({it})"
        return it + ("*" if kind is Star else "?"), _LVL_POSTFIX
    if kind is Empty:
        return "@empty", _LVL_ATOM
    if kind is Epsilon:
        return "@epsilon", _LVL_ATOM
    if kind is Hole:
        return "@hole", _LVL_ATOM
    raise TypeError(f"unknown node {r!r}")


def to_text(r: Regex) -> str:
    """Canonical concrete syntax; parse(to_text(r)) is structurally r."""
    return _print(r)[0]


# ---------------------------------------------------------------------------
# Matching (Glushkov position automaton + lazy subset simulation)


class _Matcher:
    """Compiled full-match automaton for one regex.

    Positions are the Literal/Wildcard leaves; states are bitmasks over
    positions.  Subset transitions are memoised per (mask, symbol), so
    repeated matching against the same regex amortises to a DFA walk.
    """

    __slots__ = ("nullable", "first_mask", "last_mask", "follow", "sym_mask",
                 "wild_mask", "_cache", "steps")

    def __init__(self, r: Regex):
        syms: list[str | None] = []  # None marks a wildcard position

        def build(node: Regex) -> tuple[bool, int, int]:
            # returns (nullable, first_mask, last_mask); extends follow
            kind = type(node)
            if kind is Literal or kind is Wildcard:
                bit = 1 << len(syms)
                syms.append(node.symbol if kind is Literal else None)
                follow.append(0)
                return False, bit, bit
            if kind is Union:
                ln, lf, ll = build(node.left)
                rn, rf, rl = build(node.right)
                return ln or rn, lf | rf, ll | rl
            if kind is Concat:
                ln, lf, ll = build(node.left)
                rn, rf, rl = build(node.right)
                _link(ll, rf)
                first = lf | rf if ln else lf
                last = rl | ll if rn else rl
                return ln and rn, first, last
            if kind is Star:
                n, f, l = build(node.inner)
                _link(l, f)
                return True, f, l
            if kind is Question:
                _, f, l = build(node.inner)
                return True, f, l
            if kind is Empty:
                return False, 0, 0
            if kind is Epsilon:
                return True, 0, 0
            if kind is Hole:
                raise IncompleteRegexError("cannot match a regex containing holes")
            raise TypeError(f"unknown node {node!r}")

        def _link(last_mask: int, first_mask: int):
            m = last_mask
            while m:
                low = m & -m
                follow[low.bit_length() - 1] |= first_mask
                m ^= low

        follow: list[int] = []
        self.nullable, self.first_mask, self.last_mask = build(r)
        self.follow = follow
        self.wild_mask = 0
        by_sym: dict[str, int] = {}
        for i, s in enumerate(syms):
            if s is None:
                self.wild_mask |= 1 << i
            else:
                by_sym[s] = by_sym.get(s, 0) | (1 << i)
        self.sym_mask = by_sym
        self._cache: dict[tuple[int, str], int] = {}
        self.steps = 0  # simulation work counter, used by complexity tests

    def _step(self, mask: int, c: str) -> int:
        key = (mask, c)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        out = 0
        m = mask
        while m:
            low = m & -m
            out |= self.follow[low.bit_length() - 1]
            m ^= low
            self.steps += 1
        out &= self.sym_mask.get(c, 0) | self.wild_mask
        self._cache[key] = out
        return out

    def run(self, s: str) -> bool:
        if not s:
            return self.nullable
        allowed = self.sym_mask.get(s[0], 0) | self.wild_mask
        cur = self.first_mask & allowed
        self.steps += 1
        for c in s[1:]:
            if not cur:
                return False
            cur = self._step(cur, c)
        return bool(cur & self.last_mask)


@lru_cache(maxsize=1 << 16)
def _compiled(r: Regex) -> _Matcher:
    return _Matcher(r)


def matches(r: Regex, s: str) -> bool:
    """Full-string membership test: s in L(r).

    Raises IncompleteRegexError if r contains holes.
    """
    return _compiled(r).run(s)


def matcher_steps(r: Regex) -> int:
    """Total simulation steps spent on r so far (debug/complexity checks)."""
    return _compiled(r).steps


@dataclass(frozen=True)
class Language:
    """Finite slice of a regex language, used as a test oracle."""

    strings: frozenset[str]
    max_len: int


def enumerate_language(r: Regex, max_len: int, alphabet: Alphabet) -> Language:
    """All strings of length <= max_len accepted by r.

    Brute force by construction: generates every candidate string and
    filters with matches().  max_len is capped at 12 to guard against
    blow-up; callers are expected to keep the alphabet small too.
    """
    if max_len > 12:
        raise BoundExceededError(f"enumerate_language bound {max_len} exceeds 12")
    if not is_complete(r):
        raise IncompleteRegexError("cannot enumerate a regex containing holes")
    found = set()
    for length in range(max_len + 1):
        for tup in itertools.product(alphabet.symbols, repeat=length):
            s = "".join(tup)
            if matches(r, s):
                found.add(s)
    return Language(frozenset(found), max_len)


def count_language(r: Regex, max_len: int, alphabet: Alphabet, limit: int = 1 << 30) -> int:
    """Number of distinct strings of length <= max_len in L(r), up to limit.

    Dynamic programming over the lazily determinised position automaton;
    feasible where enumerate_language is not (large alphabets/lengths).
    """
    if not is_complete(r):
        raise IncompleteRegexError("cannot count a regex containing holes")
    m = _compiled(r)
    total = 1 if m.nullable else 0
    # distribution over subset-states, starting before the first symbol
    dist: dict[int, int] = {}
    for c in alphabet.symbols:
        nxt = m.first_mask & (m.sym_mask.get(c, 0) | m.wild_mask)
        if nxt:
            dist[nxt] = dist.get(nxt, 0) + 1
    for _ in range(max_len):
        total += sum(n for mask, n in dist.items() if mask & m.last_mask)
        if total >= limit:
            return limit
        nxt_dist: dict[int, int] = {}
        for mask, n in dist.items():
            for c in alphabet.symbols:
                nmask = m._step(mask, c)
                if nmask:
                    nxt_dist[nmask] = nxt_dist.get(nmask, 0) + n
        dist = nxt_dist
        if not dist:
            break
    return min(total, limit)


# ---------------------------------------------------------------------------
# Simplification


def simplify(r: Regex) -> Regex:
    """Language-preserving shrink rules applied to a fixpoint.

    Holes are opaque atoms.  The result never has more nodes than the
    input, so enumeration state stays small.
    """
    kind = type(r)
    if kind is Union:
        return _local(Union(simplify(r.left), simplify(r.right)))
    if kind is Concat:
        return _local(Concat(simplify(r.left), simplify(r.right)))
    if kind is Star:
        return _local(Star(simplify(r.inner)))
    if kind is Question:
        return _local(Question(simplify(r.inner)))
    return r


def _local(r: Regex) -> Regex:
    """Fixpoint of the top-level rewrite (children assumed simplified)."""
    while True:
        new = _rewrite(r)
        if new is r:
            return r
        r = new


def _rewrite(r: Regex) -> Regex:
    kind = type(r)
    if kind is Union:
        if type(r.left) is Empty:
            return r.right
        if type(r.right) is Empty:
            return r.left
        if r.left == r.right:
            return r.left
    elif kind is Concat:
        lk, rk = type(r.left), type(r.right)
        if lk is Empty or rk is Empty:
            return EMPTY
        if lk is Epsilon:
            return r.right
        if rk is Epsilon:
            return r.left
    elif kind is Star:
        ik = type(r.inner)
        if ik is Epsilon or ik is Empty:
            return EPSILON
        if ik is Star:
            return r.inner
        if ik is Question:
            return Star(r.inner.inner)
    elif kind is Question:
        ik = type(r.inner)
        if ik is Epsilon or ik is Empty:
            return EPSILON
        if ik is Question or ik is Star:
            return r.inner
    return r
