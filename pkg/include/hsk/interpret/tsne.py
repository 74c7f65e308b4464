from typing import List

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ..cli.logger import hsklogger
from ..constants import TSNE_PERPLEXITY, TSNE_ITERATIONS, TSNE_EXAGGERATION, \
    TSNE_EXAGGERATION_ITERATIONS, TSNE_MOMENTUM, TSNE_FINAL_MOMENTUM, TSNE_LEARNING_RATE, \
    TSNE_MIN_GAIN, TSNE_INIT_STD
from ..exceptions import HSKDataException

MACHINE_EPSILON = np.finfo(np.double).eps
_BISECTION_STEPS = 100
_BISECTION_TOL = 1e-5


def _conditional_row(distances: np.ndarray, beta: float) -> np.ndarray:
    # shifted by the nearest distance, cancels out after normalization
    shifted = distances - distances.min()
    return np.exp(-shifted * beta)


def _row_entropy(distances: np.ndarray, beta: float) -> float:
    shifted = distances - distances.min()
    weights = np.exp(-shifted * beta)
    total = weights.sum()
    return float(np.log(total) + beta * np.sum(shifted * weights) / total)


def _find_beta(distances: np.ndarray, perplexity: float) -> float:
    """
    Bisection on the Gaussian precision of one point until the entropy of its
    conditional distribution matches `log(perplexity)`.
    """
    target = np.log(perplexity)
    beta, lo, hi = 1.0, 0.0, np.inf
    for _ in range(_BISECTION_STEPS):
        entropy = _row_entropy(distances, beta)
        if abs(entropy - target) < _BISECTION_TOL:
            break
        if entropy > target:
            lo = beta
            beta = beta * 2.0 if hi == np.inf else (beta + hi) / 2.0
        else:
            hi = beta
            beta = (beta + lo) / 2.0
    return beta


def joint_probabilities(vectors: np.ndarray, perplexity: float) -> np.ndarray:
    """
    Symmetrized Gaussian affinities, each row calibrated to the given perplexity.
    The diagonal is zero and the matrix sums to 1.
    """
    sqdist = squareform(pdist(vectors, "sqeuclidean"))
    m = sqdist.shape[0]
    conditional = np.zeros((m, m))
    others = ~np.eye(m, dtype=bool)
    for i in range(m):
        row = sqdist[i, others[i]]
        weights = _conditional_row(row, _find_beta(row, perplexity))
        conditional[i, others[i]] = weights / weights.sum()
    P = (conditional + conditional.T) / (2.0 * m)
    P = np.maximum(P, MACHINE_EPSILON)
    np.fill_diagonal(P, 0.0)
    return P / P.sum()


def _student_t(Y: np.ndarray):
    num = 1.0 / (1.0 + squareform(pdist(Y, "sqeuclidean")))
    np.fill_diagonal(num, 0.0)
    Q = np.maximum(num / num.sum(), MACHINE_EPSILON)
    return num, Q


def kl_divergence(P: np.ndarray, Q: np.ndarray) -> float:
    mask = P > 0
    return float(np.sum(P[mask] * np.log(P[mask] / Q[mask])))


class TSNE:
    """
    Exact t-SNE to two dimensions.

    Gradient descent with momentum and per-coordinate adaptive gains, early exaggeration
    of the affinities over the first iterations and re-centering of the map after every
    update. `kl_trace[k]` holds the objective after `k + 1` iterations.
    """

    def __init__(self, perplexity: float = TSNE_PERPLEXITY, iterations: int = TSNE_ITERATIONS,
                 seed: int = 0, learning_rate: float = TSNE_LEARNING_RATE):
        if perplexity <= 0:
            raise ValueError("Perplexity must be positive.")
        if iterations < 1:
            raise ValueError("At least one iteration is needed.")
        self.perplexity = perplexity
        self.iterations = iterations
        self.seed = seed
        self.learning_rate = learning_rate
        self.kl_trace: List[float] = []

    def _check(self, vectors: np.ndarray):
        if vectors.ndim != 2:
            raise HSKDataException(f"t-SNE expects a matrix, got shape {vectors.shape}.")
        m = vectors.shape[0]
        if m < 4:
            raise HSKDataException(f"t-SNE needs at least 4 points, got {m}.")
        if self.perplexity >= m:
            raise HSKDataException(f"Perplexity ({self.perplexity}) must be smaller than the "
                                   f"number of points ({m}).")
        if not np.all(np.isfinite(vectors)):
            raise HSKDataException("t-SNE input contains non-finite values.")
        if np.all(vectors == vectors[0]):
            raise HSKDataException("All the points are identical, there is nothing to project.")

    def fit(self, vectors: np.ndarray) -> np.ndarray:
        vectors = np.asarray(vectors, dtype=np.float64)
        self._check(vectors)
        m = vectors.shape[0]
        P = joint_probabilities(vectors, self.perplexity)
        rng = np.random.default_rng(self.seed)
        Y = rng.normal(0.0, TSNE_INIT_STD, size=(m, 2))
        update = np.zeros_like(Y)
        gains = np.ones_like(Y)
        self.kl_trace = []
        for it in range(self.iterations + 1):
            num, Q = _student_t(Y)
            if it > 0:
                self.kl_trace.append(kl_divergence(P, Q))
                if it % 100 == 0:
                    hsklogger.debug(f"t-SNE iteration {it}: KL = {self.kl_trace[-1]:.6f}")
            if it == self.iterations:
                break
            early = it < TSNE_EXAGGERATION_ITERATIONS
            momentum = TSNE_MOMENTUM if early else TSNE_FINAL_MOMENTUM
            PQ = ((TSNE_EXAGGERATION * P if early else P) - Q) * num
            grad = 4.0 * (PQ.sum(axis=1)[:, None] * Y - PQ @ Y)
            flipped = update * grad < 0.0
            gains[flipped] += 0.2
            gains[~flipped] *= 0.8
            np.clip(gains, TSNE_MIN_GAIN, None, out=gains)
            update = momentum * update - self.learning_rate * gains * grad
            Y = Y + update
            Y -= Y.mean(axis=0)
        if not np.all(np.isfinite(Y)):
            raise HSKDataException("t-SNE diverged to non-finite coordinates.")
        return Y


def tsne_project(vectors: np.ndarray, perplexity: float = TSNE_PERPLEXITY,
                 iterations: int = TSNE_ITERATIONS, seed: int = 0) -> np.ndarray:
    return TSNE(perplexity=perplexity, iterations=iterations, seed=seed).fit(vectors)
