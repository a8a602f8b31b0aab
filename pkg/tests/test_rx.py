import random

import pytest

from resynth import rx
from resynth.rx import (
    Alphabet, AlphabetError, Concat, Epsilon, Hole, IncompleteRegexError,
    Literal, Question, RegexSyntaxError, Star, Union,
)

from oracles import random_ast, set_language

AB = Alphabet.of("ab")
ABC = Alphabet.of("abc")
BITS = Alphabet.of("01")


class TestParse:
    def test_paper_chain(self):
        r = rx.parse("a*b*c*.*", ABC)
        expected = Concat(
            Concat(Concat(Star(Literal("a")), Star(Literal("b"))), Star(Literal("c"))),
            Star(rx.WILDCARD),
        )
        assert r == expected

    def test_epsilon_token(self):
        assert rx.parse("@epsilon", AB) == rx.EPSILON
        assert rx.parse("@empty", AB) == rx.EMPTY

    def test_question_union(self):
        r = rx.parse("(0+1)?0", BITS)
        assert r == Concat(Question(Union(Literal("0"), Literal("1"))), Literal("0"))

    def test_pipe_is_union(self):
        assert rx.parse("a|b", AB) == rx.parse("a+b", AB)

    def test_postfix_binds_to_atom(self):
        assert rx.parse("ab*", AB) == Concat(Literal("a"), Star(Literal("b")))
        assert rx.parse("a**", AB) == Star(Star(Literal("a")))

    def test_syntax_errors_carry_position(self):
        with pytest.raises(RegexSyntaxError) as info:
            rx.parse("a+(b", AB)
        assert info.value.position == 4
        with pytest.raises(RegexSyntaxError):
            rx.parse("*a", AB)
        with pytest.raises(RegexSyntaxError):
            rx.parse("", AB)

    def test_symbol_outside_alphabet(self):
        with pytest.raises(AlphabetError):
            rx.parse("abz", AB)


class TestPrint:
    def test_atoms(self):
        assert rx.to_text(Star(rx.WILDCARD)) == ".*"
        assert rx.to_text(Union(Literal("a"), rx.EPSILON)) == "a+@epsilon"

    def test_minimal_parens(self):
        assert rx.to_text(rx.parse("(a+b)c", ABC)) == "(a+b)c"
        assert rx.to_text(rx.parse("a+bc", ABC)) == "a+bc"
        assert rx.to_text(rx.parse("(ab)*", AB)) == "(ab)*"

    def test_round_trip_random(self):
        rng = random.Random(7)
        for _ in range(1000):
            r = random_ast(rng, ABC, max_size=14)
            assert rx.parse(rx.to_text(r), ABC) == r


class TestMatches:
    def test_paper_positive(self):
        r = rx.parse("a*b*c*.*", ABC)
        assert rx.matches(r, "aabbccabca")

    def test_epsilon(self):
        assert rx.matches(rx.EPSILON, "")
        assert not rx.matches(rx.EPSILON, "a")

    def test_paper_counterexample_regex(self):
        r = rx.parse("ab*aaa?", AB)
        assert rx.matches(r, "aaaa")

    def test_full_match_not_substring(self):
        r = rx.parse("ab", AB)
        assert not rx.matches(r, "abb")
        assert not rx.matches(r, "aab")

    def test_holes_rejected(self):
        with pytest.raises(IncompleteRegexError):
            rx.matches(Concat(Literal("a"), Hole()), "a")

    def test_soundness_vs_set_semantics(self):
        # full-match agreement with the recursive set-semantics oracle
        rng = random.Random(11)
        for alphabet in (AB, ABC):
            strings = [""]
            for length in range(1, 7):
                strings += ["".join(rng.choice(alphabet.symbols) for _ in range(length))
                            for _ in range(30)]
            for _ in range(150):
                r = random_ast(rng, alphabet, max_size=8)
                lang = set_language(r, 6, alphabet)
                for s in strings:
                    assert rx.matches(r, s) == (s in lang), (rx.to_text(r), s)

    def test_step_counter_bound(self):
        # simulation work is at most (positions + 1) per consumed symbol
        rng = random.Random(3)
        for _ in range(200):
            r = random_ast(rng, AB, max_size=10)
            m = rx._Matcher(r)
            s = "".join(rng.choice("ab") for _ in range(rng.randint(0, 12)))
            m.run(s)
            positions = len(m.follow)
            assert m.steps <= (positions + 1) * max(len(s), 1)


class TestEnumerate:
    def test_star(self):
        lang = rx.enumerate_language(rx.parse("a*", AB), 2, AB)
        assert lang.strings == {"", "a", "aa"}

    def test_union(self):
        lang = rx.enumerate_language(rx.parse("a+b", AB), 1, AB)
        assert lang.strings == {"a", "b"}

    def test_bits(self):
        lang = rx.enumerate_language(rx.parse("(0+1)*0", BITS), 2, BITS)
        assert lang.strings == {"0", "00", "10"}

    def test_bound_guard(self):
        with pytest.raises(rx.BoundExceededError):
            rx.enumerate_language(rx.parse("a*", AB), 13, AB)

    def test_count_language_agrees_with_enumeration(self):
        rng = random.Random(19)
        for _ in range(200):
            r = random_ast(rng, AB, max_size=10)
            assert rx.count_language(r, 5, AB) == len(rx.enumerate_language(r, 5, AB).strings)


class TestSimplify:
    def test_star_idempotent(self):
        assert rx.simplify(Star(Star(Literal("a")))) == Star(Literal("a"))

    def test_concat_epsilon(self):
        assert rx.simplify(Concat(Literal("a"), rx.EPSILON)) == Literal("a")

    def test_listed_rules(self):
        a = Literal("a")
        assert rx.simplify(Union(a, a)) == a
        assert rx.simplify(Concat(rx.EPSILON, a)) == a
        assert rx.simplify(Concat(a, rx.EMPTY)) == rx.EMPTY
        assert rx.simplify(Union(rx.EMPTY, a)) == a
        assert rx.simplify(Question(Question(a))) == Question(a)
        assert rx.simplify(Question(Star(a))) == Star(a)
        assert rx.simplify(Star(rx.EPSILON)) == rx.EPSILON

    def test_holes_are_opaque(self):
        h = Hole(1)
        assert rx.simplify(Concat(h, rx.EPSILON)) == h
        assert rx.simplify(Union(h, h)) == h

    def test_language_preserved_random(self):
        rng = random.Random(23)
        for _ in range(1000):
            r = random_ast(rng, AB, max_size=12)
            simplified = rx.simplify(r)
            assert rx.size(simplified) <= rx.size(r)
            before = rx.enumerate_language(r, 6, AB).strings
            after = rx.enumerate_language(simplified, 6, AB).strings
            assert before == after, rx.to_text(r)


class TestSize:
    def test_leaf(self):
        assert rx.size(Literal("a")) == 1

    def test_star(self):
        assert rx.size(Star(Literal("a"))) == 2

    def test_concat_of_stars(self):
        assert rx.size(rx.parse("a*b*", AB)) == 5
