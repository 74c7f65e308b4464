import dataclasses
from typing import Dict, Tuple

import numpy as np
from scipy.special import softmax, log_softmax

from ..exceptions import HSKShapeException


@dataclasses.dataclass
class HeadParams:
    W: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise HSKShapeException(f"Inconsistent head parameters: W{self.W.shape}, "
                                    f"b{self.b.shape}.")

    @property
    def num_labels(self) -> int:
        return self.W.shape[0]

    @property
    def input_dim(self) -> int:
        return self.W.shape[1]

    @classmethod
    def zeros(cls, input_dim: int, num_labels: int, dtype=np.float64) -> 'HeadParams':
        return HeadParams(W=np.zeros((num_labels, input_dim), dtype=dtype),
                          b=np.zeros(num_labels, dtype=dtype))

    @classmethod
    def initialize(cls, input_dim: int, num_labels: int, rng: np.random.Generator,
                   dtype=np.float64) -> 'HeadParams':
        bound = 1.0 / np.sqrt(input_dim)
        return HeadParams(W=rng.uniform(-bound, bound, (num_labels, input_dim)).astype(dtype),
                          b=np.zeros(num_labels, dtype=dtype))

    def arrays(self, prefix: str) -> Dict[str, np.ndarray]:
        return {f"{prefix}.W": self.W, f"{prefix}.b": self.b}


def head_logits(s: np.ndarray, head: HeadParams) -> np.ndarray:
    if s.shape != (head.input_dim,):
        raise HSKShapeException(f"Head expects a {head.input_dim}-dimensional sentence vector, "
                                f"got shape {s.shape}.")
    return head.W @ s + head.b


def head_forward(s: np.ndarray, head: HeadParams) -> np.ndarray:
    return softmax(head_logits(s, head))


def _check_gold(gold: int, num_labels: int):
    if not (0 <= gold < num_labels):
        raise HSKShapeException(f"Gold label {gold} out of range for {num_labels} labels.")


def cross_entropy(p: np.ndarray, gold: int) -> float:
    _check_gold(gold, p.shape[0])
    return float(-np.log(p[gold]))


def cross_entropy_with_logits(logits: np.ndarray, gold: int) -> Tuple[float, np.ndarray]:
    """
    Returns the loss and its gradient wrt the logits, `softmax(logits) - onehot(gold)`.
    """
    _check_gold(gold, logits.shape[0])
    logp = log_softmax(logits)
    dlogits = np.exp(logp)
    dlogits[gold] -= 1.0
    return float(-logp[gold]), dlogits
