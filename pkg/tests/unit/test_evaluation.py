import csv
import json
import os
import tempfile
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from hsk.evaluation import macro_f1, confusion, evaluate, repeated_experiment, write_reports
from hsk.exceptions import HSKDataException
from hsk.types import CleanPost, TaskSpec


def _brute_force_macro_f1(gold, pred) -> float:
    scores = []
    for k in sorted(set(gold) | set(pred)):
        tp = sum(1 for g, p in zip(gold, pred) if g == k and p == k)
        fp = sum(1 for g, p in zip(gold, pred) if g != k and p == k)
        fn = sum(1 for g, p in zip(gold, pred) if g == k and p != k)
        scores.append(0.0 if tp == 0 else 2 * tp / (2 * tp + fp + fn))
    return sum(scores) / len(scores)


def _posts(counts, task: str):
    posts = []
    for label, count in enumerate(counts):
        posts.extend(CleanPost(id=f"{task}-{label}-{i}", tokens=("w",), label_id=label, task=task)
                     for i in range(count))
    return posts


class TestMacroF1(unittest.TestCase):

    def test_perfect(self):
        self.assertEqual(macro_f1([0, 1, 2, 1], [0, 1, 2, 1], 3), 1.0)

    def test_hand_example(self):
        # class 0: tp 1 fp 1 fn 1, class 1: tp 1 fp 1 fn 1
        self.assertAlmostEqual(macro_f1([0, 0, 1, 1], [0, 1, 1, 0], 2), 0.5)

    def test_absent_classes_are_ignored(self):
        # class 2 of 3 never occurs, only classes 0 and 1 are averaged
        self.assertEqual(macro_f1([0, 1], [0, 1], 3), 1.0)

    def test_predicted_but_absent_scores_zero(self):
        self.assertAlmostEqual(macro_f1([0, 0], [0, 1], 2), (2 / 3 + 0.0) / 2)

    def test_random_against_brute_force(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            K = int(rng.integers(2, 6))
            n = int(rng.integers(1, 40))
            gold = rng.integers(0, K, size=n).tolist()
            pred = rng.integers(0, K, size=n).tolist()
            self.assertAlmostEqual(macro_f1(gold, pred, K), _brute_force_macro_f1(gold, pred),
                                   places=12)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=30),
           st.permutations(range(4)))
    def test_relabel_invariance(self, pairs, perm):
        gold = [g for g, _ in pairs]
        pred = [p for _, p in pairs]
        relabeled = macro_f1([perm[g] for g in gold], [perm[p] for p in pred], 4)
        self.assertAlmostEqual(macro_f1(gold, pred, 4), relabeled, places=12)

    def test_errors(self):
        with self.assertRaises(HSKDataException):
            macro_f1([], [], 2)
        with self.assertRaises(HSKDataException):
            macro_f1([0, 1], [0], 2)
        with self.assertRaises(HSKDataException):
            macro_f1([0, 2], [0, 1], 2)


class TestConfusion(unittest.TestCase):

    def test_marginals(self):
        rng = np.random.default_rng(10)
        gold = rng.integers(0, 3, size=50).tolist()
        pred = rng.integers(0, 3, size=50).tolist()
        cm = confusion(gold, pred, 3, ["a", "b", "c"])
        self.assertEqual(cm.total, 50)
        np.testing.assert_array_equal(cm.counts.sum(axis=1), np.bincount(gold, minlength=3))
        np.testing.assert_array_equal(cm.counts.sum(axis=0), np.bincount(pred, minlength=3))
        np.testing.assert_allclose(cm.normalized().sum(axis=1)[np.bincount(gold, minlength=3) > 0],
                                   1.0)

    def test_most_confused(self):
        cm = confusion([0, 0, 0, 0, 1, 1], [0, 2, 2, 1, 1, 1], 3, ["hate", "offensive", "none"])
        self.assertEqual(cm.most_confused(), [("hate", "none", 0.5), ("offensive", "hate", 0.0)])
        np.testing.assert_array_equal(cm.counts.diagonal(), [1, 2, 0])

    def test_evaluate(self):
        task = TaskSpec(name="t", labels=["hate", "offensive", "none"])
        report = evaluate([0, 0, 1, 2], [0, 1, 1, 2], task)
        self.assertEqual(report.support, [2, 1, 1])
        self.assertEqual(report.precision, [1.0, 0.5, 1.0])
        self.assertEqual(report.recall, [0.5, 1.0, 1.0])
        self.assertAlmostEqual(report.macro_f1, (2 / 3 + 2 / 3 + 1.0) / 3)
        self.assertEqual(report.confusion.counts.tolist(), [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
        self.assertEqual(report.std, 0.0)


class _AlternatingLearner:
    """
    Perfect on even seeds, always predicts the first label on odd seeds.
    """

    def __init__(self):
        self.seeds = []

    def fit(self, tasks, seed):
        self.seeds.append(seed)

        def predictor(task, posts):
            if seed % 2 == 0:
                return [post.label_id for post in posts]
            return [0] * len(posts)

        return predictor


class TestRepeatedExperiment(unittest.TestCase):

    task = TaskSpec(name="t", labels=["a", "b"])

    def test_mean_and_population_std(self):
        learner = _AlternatingLearner()
        reports = repeated_experiment(learner, [(self.task, _posts([20, 30], "t"))], repetitions=4)
        self.assertEqual(learner.seeds, [0, 1, 2, 3])
        report = reports["t"]
        # odd seeds: valid holds 2 + 3 posts, class "a" scores 4/7, class "b" 0
        np.testing.assert_allclose(report.runs, [1.0, 2 / 7, 1.0, 2 / 7])
        self.assertAlmostEqual(report.mean, (1.0 + 2 / 7) / 2)
        self.assertAlmostEqual(report.std, (1.0 - 2 / 7) / 2)
        self.assertEqual(report.confusion.total, 20)

    def test_repetitions(self):
        with self.assertRaises(ValueError):
            repeated_experiment(_AlternatingLearner(), [(self.task, _posts([5, 5], "t"))], 0)

    def test_write_reports(self):
        reports = repeated_experiment(_AlternatingLearner(), [(self.task, _posts([20, 30], "t"))],
                                      repetitions=2)
        with tempfile.TemporaryDirectory() as tmp:
            write_reports(reports, tmp)
            with open(os.path.join(tmp, "runs.csv"), "rt") as fin:
                rows = list(csv.reader(fin))
            self.assertEqual(rows[0], ["run", "task", "macro_f1"])
            self.assertEqual([r[0] for r in rows[1:]], ["0", "1"])
            with open(os.path.join(tmp, "summary.json"), "rt") as fin:
                summary = json.load(fin)
            self.assertEqual(summary["t"]["runs"], reports["t"].runs)
            self.assertIn("per_class", summary["t"])
            self.assertTrue(os.path.isfile(os.path.join(tmp, "confusion.t.csv")))
            with open(os.path.join(tmp, "confusion.t.normalized.csv"), "rt") as fin:
                grid = list(csv.reader(fin))
            self.assertEqual(grid[0], ["gold\\pred", *self.task.labels])
            for row in grid[1:]:
                self.assertAlmostEqual(sum(float(v) for v in row[1:]), 1.0, places=9)
            self.assertEqual(summary["t"]["confusion_normalized"],
                             reports["t"].confusion.normalized().tolist())


if __name__ == '__main__':
    unittest.main()
