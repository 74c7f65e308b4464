from typing import Sequence, Optional

import numpy as np

from ..embeddings import Encoder
from ..exceptions import HSKShapeException
from ..neural.model import ModelParams, model_forward
from ..neural.pooling import PoolProvenance
from ..types import HighlightReport, TaskSpec


def word_scores(prov: PoolProvenance, n: int, H: int) -> np.ndarray:
    """
    Share of the pooled dimensions won by each token, forward and backward wins summed.
    Scores are nonnegative and sum to 1.
    """
    if prov.size != H:
        raise HSKShapeException(f"Provenance covers {prov.size} dimensions, expected {H}.")
    if n < 1:
        raise HSKShapeException("Cannot score an empty sentence.")
    if prov.size and int(prov.tokens.max()) >= n:
        raise HSKShapeException(f"Provenance refers to token {int(prov.tokens.max())}, the "
                                f"sentence has {n} tokens.")
    return np.bincount(prov.tokens, minlength=n).astype(np.float64) / H


def highlight(params: ModelParams, encoder: Encoder, task: TaskSpec, tokens: Sequence[str],
              gold: Optional[int] = None) -> HighlightReport:
    """
    Classifies one tokenized post and attributes the decision to its words.
    Empty posts are scored as the placeholder token they are encoded with.
    """
    X = encoder.encode(tokens)
    out = model_forward(params, X, task.name)
    scores = word_scores(out.provenance, X.shape[0], params.hidden)
    return HighlightReport(
        tokens=list(encoder.tokens_for(tokens)),
        scores=scores.tolist(),
        predicted=task.labels[out.predicted],
        gold=task.labels[gold] if gold is not None else "",
        task=task.name,
    )
