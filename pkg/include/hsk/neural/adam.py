import dataclasses
from typing import Dict, Mapping, Tuple

import numpy as np

from ..constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON
from ..exceptions import HSKNumericalException, HSKShapeException


@dataclasses.dataclass(frozen=True)
class AdamHyper:
    lr: float = 0.001
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPSILON
    weight_decay: float = 0.0


@dataclasses.dataclass
class AdamState:
    m: Dict[str, np.ndarray]
    v: Dict[str, np.ndarray]
    t: int = 0

    @classmethod
    def for_params(cls, params: Mapping[str, np.ndarray]) -> 'AdamState':
        return AdamState(
            m={name: np.zeros_like(value) for name, value in params.items()},
            v={name: np.zeros_like(value) for name, value in params.items()},
        )


def adam_step(params: Mapping[str, np.ndarray], grads: Mapping[str, np.ndarray],
              state: AdamState, hyper: AdamHyper) -> Tuple[Mapping[str, np.ndarray], AdamState]:
    """
    One bias-corrected Adam update, applied in place.

    Weight decay is coupled (L2 style): `weight_decay * theta` is added to the gradient
    before the moment estimates are updated.
    """
    if params.keys() != grads.keys() or params.keys() != state.m.keys():
        raise HSKShapeException("Parameters, gradients and optimizer state name different arrays.")
    for name, g in grads.items():
        if g.shape != params[name].shape:
            raise HSKShapeException(f"Gradient of '{name}' has shape {g.shape}, "
                                    f"parameter has shape {params[name].shape}.")
        if not np.all(np.isfinite(g)):
            raise HSKNumericalException(f"Non-finite gradient entries in '{name}' "
                                        f"at optimizer step {state.t + 1}.")
    state.t += 1
    bc1 = 1.0 - hyper.beta1 ** state.t
    bc2 = 1.0 - hyper.beta2 ** state.t
    for name, theta in params.items():
        g = grads[name]
        if hyper.weight_decay:
            g = g + hyper.weight_decay * theta
        m, v = state.m[name], state.v[name]
        m *= hyper.beta1
        m += (1.0 - hyper.beta1) * g
        v *= hyper.beta2
        v += (1.0 - hyper.beta2) * (g * g)
        theta -= hyper.lr * (m / bc1) / (np.sqrt(v / bc2) + hyper.eps)
    return params, state
