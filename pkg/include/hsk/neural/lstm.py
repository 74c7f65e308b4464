import dataclasses
from typing import Dict, List, Tuple, Optional

import numpy as np
from scipy.special import expit

from ..exceptions import HSKShapeException


@dataclasses.dataclass
class LstmParams:
    """
    Parameters of one LSTM direction. Gates are stacked in the order
    input, forget, cell candidate, output along the first axis of `W`, `U` and `b`.
    """
    W: np.ndarray
    U: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        four_h = self.b.shape[0]
        if four_h % 4 != 0 or self.U.shape != (four_h, four_h // 4) or \
                self.W.ndim != 2 or self.W.shape[0] != four_h:
            raise HSKShapeException(f"Inconsistent LSTM parameters: W{self.W.shape}, "
                                    f"U{self.U.shape}, b{self.b.shape}.")

    @property
    def input_dim(self) -> int:
        return self.W.shape[1]

    @property
    def hidden(self) -> int:
        return self.U.shape[1]

    @classmethod
    def zeros(cls, input_dim: int, hidden: int, dtype=np.float64) -> 'LstmParams':
        return LstmParams(
            W=np.zeros((4 * hidden, input_dim), dtype=dtype),
            U=np.zeros((4 * hidden, hidden), dtype=dtype),
            b=np.zeros(4 * hidden, dtype=dtype),
        )

    @classmethod
    def initialize(cls, input_dim: int, hidden: int, rng: np.random.Generator,
                   dtype=np.float64) -> 'LstmParams':
        bound = 1.0 / np.sqrt(hidden)
        b = np.zeros(4 * hidden, dtype=dtype)
        b[hidden:2 * hidden] = 1.0
        return LstmParams(
            W=rng.uniform(-bound, bound, (4 * hidden, input_dim)).astype(dtype),
            U=rng.uniform(-bound, bound, (4 * hidden, hidden)).astype(dtype),
            b=b,
        )

    def arrays(self, prefix: str) -> Dict[str, np.ndarray]:
        return {f"{prefix}.W": self.W, f"{prefix}.U": self.U, f"{prefix}.b": self.b}


@dataclasses.dataclass
class BiLstmLayer:
    forward: LstmParams
    backward: LstmParams

    def arrays(self, prefix: str) -> Dict[str, np.ndarray]:
        return {
            **self.forward.arrays(f"{prefix}.forward"),
            **self.backward.arrays(f"{prefix}.backward"),
        }


@dataclasses.dataclass
class DirectionCache:
    X: np.ndarray
    hs: np.ndarray
    cs: np.ndarray
    gates: np.ndarray
    reverse: bool


@dataclasses.dataclass
class TrunkCache:
    layers: List[Tuple[DirectionCache, DirectionCache]]


def _activate(a: np.ndarray, hidden: int) -> np.ndarray:
    gates = np.empty_like(a)
    gates[..., :2 * hidden] = expit(a[..., :2 * hidden])
    gates[..., 2 * hidden:3 * hidden] = np.tanh(a[..., 2 * hidden:3 * hidden])
    gates[..., 3 * hidden:] = expit(a[..., 3 * hidden:])
    return gates


def lstm_cell(x: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray, p: LstmParams) \
        -> Tuple[np.ndarray, np.ndarray]:
    H = p.hidden
    if x.shape != (p.input_dim,) or h_prev.shape != (H,) or c_prev.shape != (H,):
        raise HSKShapeException(f"LSTM cell expects x({p.input_dim}), h({H}), c({H}), got "
                                f"x{x.shape}, h{h_prev.shape}, c{c_prev.shape}.")
    gates = _activate(p.W @ x + p.U @ h_prev + p.b, H)
    i, f, g, o = gates[:H], gates[H:2 * H], gates[2 * H:3 * H], gates[3 * H:]
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c


def run_direction(X: np.ndarray, p: LstmParams, reverse: bool = False) \
        -> Tuple[np.ndarray, DirectionCache]:
    """
    Runs one direction over the rows of `X` from zero initial state.
    States are returned in token order whatever the reading direction.
    """
    if X.ndim != 2 or X.shape[1] != p.input_dim:
        raise HSKShapeException(f"Expected a sequence of {p.input_dim}-dimensional vectors, "
                                f"got an array of shape {X.shape}.")
    n, H = X.shape[0], p.hidden
    Xp = X[::-1] if reverse else X
    A = Xp @ p.W.T + p.b
    hs = np.zeros((n + 1, H), dtype=A.dtype)
    cs = np.zeros((n + 1, H), dtype=A.dtype)
    gates = np.empty((n, 4 * H), dtype=A.dtype)
    for s in range(n):
        gates[s] = _activate(A[s] + p.U @ hs[s], H)
        i, f, g, o = gates[s, :H], gates[s, H:2 * H], gates[s, 2 * H:3 * H], gates[s, 3 * H:]
        cs[s + 1] = f * cs[s] + i * g
        hs[s + 1] = o * np.tanh(cs[s + 1])
    states = hs[1:][::-1] if reverse else hs[1:]
    return states, DirectionCache(X=Xp, hs=hs, cs=cs, gates=gates, reverse=reverse)


def backprop_direction(dstates: np.ndarray, p: LstmParams, cache: DirectionCache) \
        -> Tuple[LstmParams, np.ndarray]:
    n, H = cache.gates.shape[0], p.hidden
    dH = dstates[::-1] if cache.reverse else dstates
    DA = np.empty_like(cache.gates)
    dh_next = np.zeros(H, dtype=DA.dtype)
    dc_next = np.zeros(H, dtype=DA.dtype)
    for s in reversed(range(n)):
        gates = cache.gates[s]
        i, f, g, o = gates[:H], gates[H:2 * H], gates[2 * H:3 * H], gates[3 * H:]
        tc = np.tanh(cache.cs[s + 1])
        dh = dH[s] + dh_next
        dc = dc_next + dh * o * (1.0 - tc * tc)
        DA[s, :H] = dc * g * i * (1.0 - i)
        DA[s, H:2 * H] = dc * cache.cs[s] * f * (1.0 - f)
        DA[s, 2 * H:3 * H] = dc * i * (1.0 - g * g)
        DA[s, 3 * H:] = dh * tc * o * (1.0 - o)
        dh_next = p.U.T @ DA[s]
        dc_next = dc * f
    grads = LstmParams(W=DA.T @ cache.X, U=DA.T @ cache.hs[:-1], b=DA.sum(axis=0))
    dX = DA @ p.W
    return grads, (dX[::-1] if cache.reverse else dX)


def encode_with_cache(X: np.ndarray, trunk: List[BiLstmLayer]) \
        -> Tuple[np.ndarray, np.ndarray, TrunkCache]:
    if X.ndim != 2 or X.shape[0] == 0:
        raise HSKShapeException("Cannot encode an empty sequence.")
    inputs = X
    caches: List[Tuple[DirectionCache, DirectionCache]] = []
    fwd: Optional[np.ndarray] = None
    bwd: Optional[np.ndarray] = None
    for layer in trunk:
        fwd, fcache = run_direction(inputs, layer.forward, reverse=False)
        bwd, bcache = run_direction(inputs, layer.backward, reverse=True)
        caches.append((fcache, bcache))
        inputs = np.concatenate([fwd, bwd], axis=1)
    return fwd, bwd, TrunkCache(layers=caches)


def bilstm_encode(X: np.ndarray, trunk: List[BiLstmLayer]) -> Tuple[np.ndarray, np.ndarray]:
    fwd, bwd, _ = encode_with_cache(X, trunk)
    return fwd, bwd


def backprop_trunk(dfwd: np.ndarray, dbwd: np.ndarray, trunk: List[BiLstmLayer],
                   cache: TrunkCache) -> List[BiLstmLayer]:
    """
    Backpropagates top-layer state gradients through every layer.
    The gradient wrt the embeddings is discarded, they are frozen.
    """
    grads: List[Optional[BiLstmLayer]] = [None] * len(trunk)
    for idx in reversed(range(len(trunk))):
        layer = trunk[idx]
        fcache, bcache = cache.layers[idx]
        gf, dX_f = backprop_direction(dfwd, layer.forward, fcache)
        gb, dX_b = backprop_direction(dbwd, layer.backward, bcache)
        grads[idx] = BiLstmLayer(forward=gf, backward=gb)
        if idx > 0:
            dinputs = dX_f + dX_b
            H = trunk[idx - 1].forward.hidden
            dfwd, dbwd = dinputs[:, :H], dinputs[:, H:]
    return grads
