import dataclasses
from enum import IntEnum
from typing import Tuple, List

import numpy as np

from ..exceptions import HSKShapeException


class Direction(IntEnum):
    FORWARD = 0
    BACKWARD = 1


@dataclasses.dataclass(frozen=True)
class PoolProvenance:
    """
    Winner of every pooled dimension: `tokens[j]` is the index of the token whose state
    was selected for dimension `j`, `directions[j]` the pass it came from.
    """
    tokens: np.ndarray
    directions: np.ndarray

    @property
    def size(self) -> int:
        return int(self.tokens.shape[0])

    def winners(self) -> List[Tuple[int, Direction]]:
        return [(int(t), Direction(int(d))) for t, d in zip(self.tokens, self.directions)]


def max_pool_with_provenance(fwd: np.ndarray, bwd: np.ndarray) \
        -> Tuple[np.ndarray, PoolProvenance]:
    if fwd.shape != bwd.shape or fwd.ndim != 2:
        raise HSKShapeException(f"Forward states {fwd.shape} and backward states {bwd.shape} "
                                f"must be two matrices of the same shape.")
    n, H = fwd.shape
    if n == 0:
        raise HSKShapeException("Cannot pool an empty sequence.")
    # candidates interleaved as (t0, fwd), (t0, bwd), (t1, fwd), ... so that argmax
    # resolves ties to the lowest token index, forward first
    candidates = np.stack([fwd, bwd], axis=1).reshape(2 * n, H)
    winners = np.argmax(candidates, axis=0)
    pooled = candidates[winners, np.arange(H)]
    return pooled, PoolProvenance(tokens=winners // 2, directions=winners % 2)


def max_pool_backward(dpooled: np.ndarray, prov: PoolProvenance, n: int) \
        -> Tuple[np.ndarray, np.ndarray]:
    H = prov.size
    dstates = np.zeros((2, n, H), dtype=dpooled.dtype)
    dstates[prov.directions, prov.tokens, np.arange(H)] = dpooled
    return dstates[Direction.FORWARD], dstates[Direction.BACKWARD]
