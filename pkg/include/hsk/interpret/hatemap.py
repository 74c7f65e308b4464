from typing import List, Sequence, Tuple

import numpy as np

from .tsne import tsne_project
from ..cli.logger import hsklogger
from ..constants import TSNE_PERPLEXITY, TSNE_ITERATIONS
from ..embeddings import Encoder
from ..exceptions import HSKDataException
from ..neural.model import ModelParams, model_forward
from ..types import CleanPost, MapPoint, TaskSpec


def pooled_vectors(params: ModelParams, encoder: Encoder, task: TaskSpec,
                   posts: Sequence[CleanPost]) -> Tuple[np.ndarray, List[int]]:
    vectors, predicted = [], []
    for post in posts:
        out = model_forward(params, encoder.encode(post.tokens), task.name)
        vectors.append(out.pooled)
        predicted.append(out.predicted)
    return np.stack(vectors).astype(np.float64), predicted


def fit_perplexity(perplexity: float, m: int) -> float:
    if perplexity < m:
        return perplexity
    fitted = max(1.0, (m - 1) / 3.0)
    hsklogger.warning(f"Perplexity {perplexity} is too large for {m} points, using {fitted:.2f}.")
    return fitted


def build_map(params: ModelParams, encoder: Encoder,
              tasks: Sequence[Tuple[TaskSpec, Sequence[CleanPost]]],
              perplexity: float = TSNE_PERPLEXITY, iterations: int = TSNE_ITERATIONS,
              seed: int = 0) -> List[MapPoint]:
    """
    Projects the pooled sentence vectors of every given post onto the plane.
    Posts of all tasks share one projection.
    """
    blocks, meta = [], []
    for task, posts in tasks:
        if not posts:
            continue
        vectors, predicted = pooled_vectors(params, encoder, task, posts)
        blocks.append(vectors)
        meta.extend((task, post, k) for post, k in zip(posts, predicted))
    if not blocks:
        raise HSKDataException("There are no posts to place on the map.")
    vectors = np.concatenate(blocks)
    coords = tsne_project(vectors, fit_perplexity(perplexity, len(vectors)), iterations, seed)
    return [
        MapPoint(x=float(x), y=float(y), task=task.name, gold=task.labels[post.label_id],
                 predicted=task.labels[k], id=post.id)
        for (x, y), (task, post, k) in zip(coords, meta)
    ]
