import random

import pytest

from resynth import bluefringe as bf
from resynth import rx
from resynth.bluefringe import Dfa, Label
from resynth.examples import ExamplePair
from resynth.rx import Alphabet

A = Alphabet.of("a")
AB = Alphabet.of("ab")


def pair(pos, neg, alphabet=AB):
    return ExamplePair.of(pos, neg, alphabet)


class TestApta:
    def test_two_leaves(self):
        apta = bf.build_apta(pair({"a"}, {"b"}))
        assert apta.n_states == 3
        assert apta.labels[apta.root] is Label.UNKNOWN
        assert apta.labels[apta.trans[0]["a"]] is Label.ACCEPT
        assert apta.labels[apta.trans[0]["b"]] is Label.REJECT

    def test_empty_string_labels_root(self):
        apta = bf.build_apta(pair({""}, set()))
        assert apta.labels[apta.root] is Label.ACCEPT

    def test_state_count_is_prefix_count(self):
        rng = random.Random(2)
        for _ in range(50):
            pos = {"".join(rng.choice("ab") for _ in range(rng.randint(0, 5)))
                   for _ in range(rng.randint(1, 6))}
            neg = {"".join(rng.choice("ab") for _ in range(rng.randint(0, 5)))
                   for _ in range(rng.randint(0, 6))} - pos
            apta = bf.build_apta(pair(pos, neg))
            prefixes = {s[:k] for s in pos | neg for k in range(len(s) + 1)}
            assert apta.n_states == len(prefixes)

    def test_conflict(self):
        with pytest.raises(bf.ConflictError):
            bf.build_apta(pair({"a"}, {"a"}))


class TestBlueFringe:
    def test_even_as(self):
        d = bf.run_bluefringe(pair({"", "aa", "aaaa"}, {"a", "aaa"}, A))
        assert d.n_states == 2
        target = bf.regex_to_dfa(rx.parse("(aa)*", A), A)
        assert bf.dfa_equal(d, target)

    def test_single_positive(self):
        d = bf.run_bluefringe(pair({"a"}, set()))
        assert d.accepts("a")

    def test_accepts_all_p_rejects_all_n(self):
        rng = random.Random(9)
        for _ in range(40):
            pos = {"".join(rng.choice("ab") for _ in range(rng.randint(0, 6)))
                   for _ in range(rng.randint(1, 8))}
            neg = {"".join(rng.choice("ab") for _ in range(rng.randint(0, 6)))
                   for _ in range(rng.randint(1, 8))} - pos
            d = bf.run_bluefringe(pair(pos, neg), debug_check=True)
            assert all(d.accepts(p) for p in pos)
            assert not any(d.accepts(n) for n in neg)

    def test_deterministic(self):
        p = pair({"ab", "aabb", ""}, {"a", "b", "abab"})
        one = bf.run_bluefringe(p).export_text()
        two = bf.run_bluefringe(p).export_text()
        assert one == two

    def test_identification_smoke(self):
        # every string up to length 8 labeled by (aa)*
        pos = {"a" * k for k in range(0, 9, 2)}
        neg = {"a" * k for k in range(1, 9, 2)}
        d = bf.run_bluefringe(pair(pos, neg, A))
        assert bf.dfa_equal(d, bf.regex_to_dfa(rx.parse("(aa)*", A), A))


def random_dfa(rng: random.Random, alphabet: Alphabet, max_states: int = 6) -> Dfa:
    n = rng.randint(1, max_states)
    trans = {s: {} for s in range(n)}
    for s in range(n):
        for c in alphabet.symbols:
            if rng.random() < 0.8:
                trans[s][c] = rng.randrange(n)
    accepting = frozenset(s for s in range(n) if rng.random() < 0.4)
    return Dfa(alphabet, 0, accepting, trans)


class TestDfaToRegex:
    def test_universal_single_state(self):
        d = Dfa(A, 0, frozenset({0}), {0: {"a": 0}})
        r = bf.dfa_to_regex(d)
        assert bf.dfa_equal(bf.regex_to_dfa(r, A), d)

    def test_even_as_language(self):
        d = Dfa(A, 0, frozenset({0}), {0: {"a": 1}, 1: {"a": 0}})
        r = bf.dfa_to_regex(d)
        got = rx.enumerate_language(r, 8, A).strings
        assert got == {"a" * k for k in range(0, 9, 2)}

    def test_round_trip_random(self):
        rng = random.Random(4)
        for _ in range(100):
            d = random_dfa(rng, AB)
            r = bf.dfa_to_regex(d)
            assert bf.dfa_equal(bf.regex_to_dfa(r, AB), d), d

    def test_round_trip_ten_states(self):
        rng = random.Random(8)
        for _ in range(25):
            d = random_dfa(rng, AB, max_states=10)
            r = bf.dfa_to_regex(d)
            assert bf.dfa_equal(bf.regex_to_dfa(r, AB), d)


class TestDfaUtils:
    def test_complement(self):
        d = bf.regex_to_dfa(rx.parse("a*b", AB), AB)
        comp = bf.complement_dfa(d)
        for s in ("", "b", "ab", "aab", "ba", "abb"):
            assert comp.accepts(s) == (not d.accepts(s))

    def test_export_format(self):
        d = Dfa(A, 0, frozenset({0}), {0: {"a": 1}, 1: {"a": 0}})
        text = d.export_text()
        assert "0 a 1" in text and "accept: 0" in text
