import os
import unittest

import numpy as np

from hsk.baseline import CharNgramLR, BaselineLearner, baseline_char_ngram_lr
from hsk.evaluation import repeated_experiment
from hsk.exceptions import HSKDataException
from hsk.preprocess import load_corpus
from hsk.sampling import stratified_split
from hsk.types import TaskSpec, CleanPost

TEST_ASSETS_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "assets"))
TOY_CORPUS = os.path.join(TEST_ASSETS_DIR, "corpora", "toy.csv")


class TestCharNgramBaseline(unittest.TestCase):

    task = TaskSpec(name="toy", labels=["hate", "offensive", "none"], path=TOY_CORPUS)

    @classmethod
    def setUpClass(cls):
        cls.posts = load_corpus(TOY_CORPUS, cls.task)
        cls.train, cls.test = stratified_split(cls.posts, 0.9, 0)

    def test_keyword_corpus(self):
        report = baseline_char_ngram_lr(self.train, self.test, self.task)
        self.assertGreaterEqual(report.macro_f1, 0.9)
        self.assertEqual(sum(report.support), len(self.test))

    def test_deterministic(self):
        first = CharNgramLR(3, epochs=20).fit(self.train)
        second = CharNgramLR(3, epochs=20).fit(self.train)
        np.testing.assert_array_equal(first.params["W"], second.params["W"])
        self.assertEqual(first.predict(self.test), second.predict(self.test))

    def test_case_insensitive(self):
        model = CharNgramLR(3, epochs=20).fit(self.train)
        lower = CleanPost(id="a", tokens=("you", "vermin"), label_id=0, task="toy")
        upper = CleanPost(id="b", tokens=("YOU", "VERMIN"), label_id=0, task="toy")
        self.assertEqual(model.predict([lower]), model.predict([upper]))

    def test_empty_sets(self):
        with self.assertRaises(HSKDataException):
            CharNgramLR(3).fit([])
        self.assertEqual(CharNgramLR(3).predict([]), [])
        with self.assertRaises(HSKDataException):
            baseline_char_ngram_lr(self.train, [], self.task)

    def test_as_learner(self):
        reports = repeated_experiment(BaselineLearner(), [(self.task, self.posts)], repetitions=2)
        self.assertEqual(len(reports["toy"].runs), 2)
        self.assertGreaterEqual(reports["toy"].mean, 0.9)


if __name__ == '__main__':
    unittest.main()
