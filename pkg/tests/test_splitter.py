import json
import random

import pytest

from resynth import rx
from resynth import splitter as sp
from resynth.examples import InvalidLabelingError, SplitLabeling
from resynth.rx import Alphabet, Star, Union

ABC = Alphabet.of("abc")


class TestPartition:
    def test_paper_four_strings(self):
        labelings = [
            SplitLabeling("aabbccabca", "1122330000"),
            SplitLabeling("abcbbc", "123000"),
            SplitLabeling("bbbcabb", "2223000"),
            SplitLabeling("aabbbc", "112223"),
        ]
        part = sp.partition_from_labelings(labelings)
        assert part.n_parts == 3
        assert part.parts[0] == ("aa", "a", "", "aa")
        assert part.parts[1] == ("bb", "b", "bbb", "bbb")
        assert part.parts[2] == ("cc", "c", "c", "c")
        assert part.wildcard_slots == (False, False, False, True)

    def test_single_part_with_tail(self):
        part = sp.partition_from_labelings([SplitLabeling("abbccdd", "1000000")])
        assert part.parts == (("a",),)
        assert part.wildcard_slots == (False, True)

    def test_invalid_labeling_rejected(self):
        with pytest.raises(InvalidLabelingError):
            SplitLabeling("aaa", "121")
        with pytest.raises(InvalidLabelingError):
            SplitLabeling("ab", "1")  # length mismatch

    def test_interior_zero_run_slot(self):
        part = sp.partition_from_labelings([SplitLabeling("abcb", "1002")])
        # the 0-run sits after part 1
        assert part.wildcard_slots == (False, True, False)
        assert part.slot_strings[0] == ("", "bc", "")

    def test_leading_zero_run_slot(self):
        part = sp.partition_from_labelings([SplitLabeling("xab", "011"),
                                            SplitLabeling("ab", "11")])
        assert part.wildcard_slots == (True, False)

    def test_reconstruction_random(self):
        rng = random.Random(31)
        for _ in range(300):
            n_parts = rng.randint(1, 5)
            labelings = []
            for _ in range(rng.randint(1, 5)):
                string = []
                labels = []
                if rng.random() < 0.3:
                    _extend(string, labels, "0", rng)
                for part in range(1, n_parts + 1):
                    if rng.random() < 0.7:
                        _extend(string, labels, str(part), rng)
                    if rng.random() < 0.2:
                        _extend(string, labels, "0", rng)
                labelings.append(SplitLabeling("".join(string), "".join(labels)))
            part = sp.partition_from_labelings(labelings)  # reassembly self-checks
            assert part.n_parts <= n_parts

    def test_empty_rejected(self):
        with pytest.raises(sp.PartitionError):
            sp.partition_from_labelings([])


def _extend(string, labels, label, rng):
    for _ in range(rng.randint(1, 3)):
        string.append(rng.choice("abc"))
        labels.append(label)


class TestGroundTruthSplit:
    def test_paper_labels(self):
        target = rx.parse("a*b*c*.*", ABC)
        got = sp.ground_truth_split(target, {"aabbccabca", "abcbbc", "bbbcabb", "aabbbc"})
        assert {lab.labels for lab in got} == {"1122330000", "123000", "2223000", "112223"}

    def test_single_part_regex(self):
        target = rx.parse("(a+b)*", ABC)
        got = sp.ground_truth_split(target, {"ab", "ba"})
        assert all(set(lab.labels) == {"1"} for lab in got)

    def test_chain_to_trivial_synthesis(self):
        # GT split + star-over-observed-symbols per part matches every positive
        target = rx.parse("a*b*c*.*", ABC)
        positives = {"aabbccabca", "abcbbc", "bbbcabb", "aabbbc"}
        part = sp.partition_from_labelings(sp.ground_truth_split(target, positives))
        pieces = []
        if part.wildcard_slots[0]:
            pieces.append(Star(rx.WILDCARD))
        for i in range(1, part.n_parts + 1):
            symbols = sorted({c for s in part.part_values(i) for c in s})
            node = rx.EPSILON
            for c in symbols:
                node = Union(node, rx.Literal(c)) if node != rx.EPSILON else rx.Literal(c)
            pieces.append(Star(node) if symbols else rx.EPSILON)
            if part.wildcard_slots[i]:
                pieces.append(Star(rx.WILDCARD))
        final = rx.concat_all(pieces)
        assert all(rx.matches(final, p) for p in positives)


class TestHeuristicRuns:
    def test_two_strings(self):
        got = sp.heuristic_runs_split({"aabb", "ab"})
        assert {(lab.string, lab.labels) for lab in got} == {("aabb", "1122"), ("ab", "12")}

    def test_singleton(self):
        got = sp.heuristic_runs_split({"a"})
        assert got[0].labels == "1"

    def test_always_valid(self):
        rng = random.Random(17)
        for _ in range(200):
            positives = {"".join(rng.choice("abc") for _ in range(rng.randint(1, 8)))
                         for _ in range(rng.randint(1, 6))}
            for lab in sp.heuristic_runs_split(positives):
                assert len(lab.labels) == len(lab.string)  # construction validated


class TestPredictions:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "pred.jsonl"
        path.write_text(json.dumps({"string": "aab", "labels": "112"}) + "\n")
        got = sp.load_predictions(path, {"aab"})
        assert got == [SplitLabeling("aab", "112")]

    def test_length_mismatch_is_schema_error(self, tmp_path):
        path = tmp_path / "pred.jsonl"
        path.write_text(json.dumps({"string": "aab", "labels": "11"}) + "\n")
        with pytest.raises(sp.PredictionSchemaError):
            sp.load_predictions(path, {"aab"})

    def test_missing_prediction(self, tmp_path):
        path = tmp_path / "pred.jsonl"
        path.write_text(json.dumps({"string": "aab", "labels": "112"}) + "\n")
        with pytest.raises(sp.MissingPredictionError):
            sp.load_predictions(path, {"aab", "bb"})

    def test_repair_rule(self, tmp_path):
        assert sp.repair_labels("1121") == "1122"
        path = tmp_path / "pred.jsonl"
        path.write_text(json.dumps({"string": "abca", "labels": "1121"}) + "\n")
        got = sp.load_predictions(path, {"abca"})
        assert got[0].labels == "1122"

    def test_repair_smooths_isolated_noise(self):
        assert sp.repair_labels("1112111") == "1111111"
        assert sp.repair_labels("101") == "100"

    def test_garbage_line_is_schema_error(self, tmp_path):
        path = tmp_path / "pred.jsonl"
        path.write_text("not json\n")
        with pytest.raises(sp.PredictionSchemaError):
            sp.load_predictions(path, {"a"})
