import copy
import dataclasses
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .head import HeadParams, head_logits, cross_entropy_with_logits
from .lstm import BiLstmLayer, LstmParams, TrunkCache, encode_with_cache, backprop_trunk
from .pooling import PoolProvenance, max_pool_with_provenance, max_pool_backward
from ..exceptions import HSKShapeException, HSKDataException
from ..types import TaskSpec, TaskName

# (embedded sentence, gold label id, task)
Sample = Tuple[np.ndarray, int, TaskName]


@dataclasses.dataclass
class ModelParams:
    trunk: List[BiLstmLayer]
    heads: Dict[TaskName, HeadParams]

    def __post_init__(self):
        if not self.trunk:
            raise HSKShapeException("A model needs at least one bi-LSTM layer.")
        H = self.hidden
        for idx, layer in enumerate(self.trunk):
            expected = self.input_dim if idx == 0 else 2 * H
            for p in [layer.forward, layer.backward]:
                if p.hidden != H or p.input_dim != expected:
                    raise HSKShapeException(
                        f"Layer {idx} expects input {expected} and hidden {H}, found input "
                        f"{p.input_dim} and hidden {p.hidden}.")
        for task, head in self.heads.items():
            if head.input_dim != H:
                raise HSKShapeException(f"Head of task '{task}' expects input {head.input_dim}, "
                                        f"the pooled vector has {H} dimensions.")

    @property
    def input_dim(self) -> int:
        return self.trunk[0].forward.input_dim

    @property
    def hidden(self) -> int:
        return self.trunk[0].forward.hidden

    @property
    def num_layers(self) -> int:
        return len(self.trunk)

    @property
    def dtype(self) -> np.dtype:
        return self.trunk[0].forward.W.dtype

    def arrays(self) -> Dict[str, np.ndarray]:
        """
        Every trainable array by name, in the fixed order used by checkpoints:
        layers bottom-up (forward then backward, W, U, b), then heads in task order (W, b).
        """
        named: Dict[str, np.ndarray] = {}
        for idx, layer in enumerate(self.trunk):
            named.update(layer.arrays(f"trunk.{idx}"))
        for task, head in self.heads.items():
            named.update(head.arrays(f"head.{task}"))
        return named

    def zeros_like(self) -> 'ModelParams':
        return ModelParams(
            trunk=[
                BiLstmLayer(
                    forward=LstmParams.zeros(layer.forward.input_dim, self.hidden, self.dtype),
                    backward=LstmParams.zeros(layer.backward.input_dim, self.hidden, self.dtype),
                ) for layer in self.trunk
            ],
            heads={
                task: HeadParams.zeros(self.hidden, head.num_labels, self.dtype)
                for task, head in self.heads.items()
            },
        )

    def copy(self) -> 'ModelParams':
        return copy.deepcopy(self)


# gradients mirror the parameters
Gradients = ModelParams


def init_model(input_dim: int, hidden: int, tasks: Sequence[TaskSpec], rng: np.random.Generator,
               layers: int = 2, dtype=np.float64) -> ModelParams:
    trunk: List[BiLstmLayer] = []
    for idx in range(layers):
        in_dim = input_dim if idx == 0 else 2 * hidden
        trunk.append(BiLstmLayer(
            forward=LstmParams.initialize(in_dim, hidden, rng, dtype),
            backward=LstmParams.initialize(in_dim, hidden, rng, dtype),
        ))
    heads = {task.name: HeadParams.initialize(hidden, task.num_labels, rng, dtype)
             for task in tasks}
    return ModelParams(trunk=trunk, heads=heads)


@dataclasses.dataclass
class ForwardPass:
    pooled: np.ndarray
    provenance: PoolProvenance
    logits: np.ndarray
    cache: TrunkCache

    @property
    def probabilities(self) -> np.ndarray:
        e = np.exp(self.logits - self.logits.max())
        return e / e.sum()

    @property
    def predicted(self) -> int:
        return int(np.argmax(self.logits))


def _head(params: ModelParams, task: TaskName) -> HeadParams:
    try:
        return params.heads[task]
    except KeyError:
        raise HSKDataException(f"The model has no classifier for task '{task}'.")


def model_forward(params: ModelParams, X: np.ndarray, task: TaskName) -> ForwardPass:
    fwd, bwd, cache = encode_with_cache(X, params.trunk)
    pooled, prov = max_pool_with_provenance(fwd, bwd)
    logits = head_logits(pooled, _head(params, task))
    return ForwardPass(pooled=pooled, provenance=prov, logits=logits, cache=cache)


def model_gradients(params: ModelParams, batch: Sequence[Sample]) -> Tuple[float, Gradients]:
    """
    Mean cross-entropy of the batch and its exact gradient wrt every trainable array.
    Samples are routed to the head of their own task.
    """
    if len(batch) == 0:
        raise HSKDataException("Cannot compute gradients of an empty batch.")
    grads = params.zeros_like()
    scale = 1.0 / len(batch)
    total = 0.0
    for X, gold, task in batch:
        head = _head(params, task)
        out = model_forward(params, X, task)
        loss, dlogits = cross_entropy_with_logits(out.logits, gold)
        total += loss
        dlogits = dlogits * scale
        ghead = grads.heads[task]
        ghead.W += np.outer(dlogits, out.pooled)
        ghead.b += dlogits
        dfwd, dbwd = max_pool_backward(head.W.T @ dlogits, out.provenance, X.shape[0])
        for glayer, dlayer in zip(grads.trunk,
                                  backprop_trunk(dfwd, dbwd, params.trunk, out.cache)):
            for gdir, ddir in [(glayer.forward, dlayer.forward),
                               (glayer.backward, dlayer.backward)]:
                gdir.W += ddir.W
                gdir.U += ddir.U
                gdir.b += ddir.b
    return total * scale, grads


def batch_loss(params: ModelParams, batch: Sequence[Sample]) -> float:
    if len(batch) == 0:
        raise HSKDataException("Cannot compute the loss of an empty batch.")
    total = 0.0
    for X, gold, task in batch:
        loss, _ = cross_entropy_with_logits(model_forward(params, X, task).logits, gold)
        total += loss
    return total / len(batch)


def predict(params: ModelParams, X: np.ndarray, task: TaskName) -> int:
    return model_forward(params, X, task).predicted
