from typing import List, Sequence, Dict

import numpy as np
from scipy.special import softmax
from sklearn.feature_extraction.text import HashingVectorizer

from .cli.logger import hsklogger
from .constants import BASELINE_NGRAM_RANGE, BASELINE_HASH_FEATURES, BASELINE_EPOCHS, \
    BASELINE_LR, BASELINE_WEIGHT_DECAY
from .evaluation import evaluate, Predictor
from .exceptions import HSKDataException, HSKNumericalException
from .neural.adam import AdamHyper, AdamState, adam_step
from .sampling import TaskData
from .types import CleanPost, EvalReport, TaskSpec, TaskName


def char_ngram_vectorizer() -> HashingVectorizer:
    return HashingVectorizer(
        analyzer="char",
        ngram_range=BASELINE_NGRAM_RANGE,
        n_features=BASELINE_HASH_FEATURES,
        lowercase=True,
        norm="l2",
        alternate_sign=False,
    )


class CharNgramLR:
    """
    Multinomial logistic regression over hashed character 1..4-grams of the lowercased
    cleaned text. Trained full-batch with Adam from a zero initialization.
    """

    def __init__(self, num_labels: int, epochs: int = BASELINE_EPOCHS, lr: float = BASELINE_LR,
                 weight_decay: float = BASELINE_WEIGHT_DECAY):
        self.num_labels = num_labels
        self.epochs = epochs
        self.hyper = AdamHyper(lr=lr, weight_decay=weight_decay)
        self.vectorizer = char_ngram_vectorizer()
        self.params: Dict[str, np.ndarray] = {
            "W": np.zeros((BASELINE_HASH_FEATURES, num_labels)),
            "b": np.zeros(num_labels),
        }

    def _features(self, posts: Sequence[CleanPost]):
        return self.vectorizer.transform([post.text for post in posts])

    def fit(self, posts: Sequence[CleanPost]) -> 'CharNgramLR':
        if len(posts) == 0:
            raise HSKDataException("Cannot fit the baseline on an empty training set.")
        X = self._features(posts)
        n = X.shape[0]
        Y = np.zeros((n, self.num_labels))
        Y[np.arange(n), [post.label_id for post in posts]] = 1.0
        state = AdamState.for_params(self.params)
        for epoch in range(self.epochs):
            P = softmax(X @ self.params["W"] + self.params["b"], axis=1)
            dZ = (P - Y) / n
            grads = {"W": np.asarray(X.T @ dZ), "b": dZ.sum(axis=0)}
            adam_step(self.params, grads, state, self.hyper)
        loss = -np.mean(np.log(np.maximum(P[np.arange(n), Y.argmax(axis=1)], 1e-300)))
        if not np.isfinite(loss):
            raise HSKNumericalException("The baseline training loss is not finite.")
        hsklogger.debug(f"Baseline trained on {n} posts, final loss {loss:.6f}")
        return self

    def predict(self, posts: Sequence[CleanPost]) -> List[int]:
        if len(posts) == 0:
            return []
        logits = self._features(posts) @ self.params["W"] + self.params["b"]
        return [int(k) for k in np.argmax(logits, axis=1)]


def baseline_char_ngram_lr(train: Sequence[CleanPost], test: Sequence[CleanPost],
                           task: TaskSpec) -> EvalReport:
    if len(test) == 0:
        raise HSKDataException("Cannot evaluate the baseline on an empty test set.")
    model = CharNgramLR(task.num_labels).fit(train)
    return evaluate([post.label_id for post in test], model.predict(test), task)


class BaselineLearner:

    def fit(self, tasks: Sequence[TaskData], seed: int) -> Predictor:
        # deterministic training, the seed only drives the splits
        models = {data.name: CharNgramLR(data.spec.num_labels).fit(data.train) for data in tasks}

        def predictor(task: TaskName, posts: Sequence[CleanPost]) -> List[int]:
            return models[task].predict(posts)

        return predictor
