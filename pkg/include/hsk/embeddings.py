import dataclasses
import hashlib
from typing import Dict, Optional, Sequence, List, Tuple

import numpy as np

from .cli.logger import hsklogger
from .constants import EMPTY_TOKEN
from .exceptions import HSKEmbeddingFileException, HSKConfigException
from .types import EmbeddingsConfig


@dataclasses.dataclass(frozen=True)
class CharFallbackConfig:
    dim: int
    ngram_len: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.ngram_len < 1:
            raise HSKConfigException(None, "The character n-gram length must be at least 1.")
        if self.dim < 1:
            raise HSKConfigException(None, "The embedding dimension must be at least 1.")
        if not (0 <= self.seed < 2 ** 64):
            raise HSKConfigException(None, "The fallback seed must be a 64-bit unsigned integer.")


class EmbeddingTable:
    """
    Immutable token to vector lookup, loaded from a GloVe text file.
    """

    def __init__(self, dim: int, vocabulary: Dict[str, int], vectors: np.ndarray,
                 path: Optional[str] = None):
        if vectors.ndim != 2 or vectors.shape[1] != dim or vectors.shape[0] != len(vocabulary):
            raise ValueError(f"Embedding matrix of shape {vectors.shape} does not match "
                             f"{len(vocabulary)} tokens of dimension {dim}.")
        self._dim = dim
        self._vocabulary = dict(vocabulary)
        self._vectors = np.array(vectors, dtype=np.float64)
        self._vectors.setflags(write=False)
        self._path = path
        self._mean_norm = float(np.linalg.norm(self._vectors, axis=1).mean()) \
            if len(self._vocabulary) else 1.0

    @classmethod
    def empty(cls, dim: int) -> 'EmbeddingTable':
        return EmbeddingTable(dim, {}, np.zeros((0, dim)))

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def mean_norm(self) -> float:
        return self._mean_norm

    @property
    def path(self) -> Optional[str]:
        return self._path

    def __len__(self) -> int:
        return len(self._vocabulary)

    def __contains__(self, token: str) -> bool:
        return token in self._vocabulary

    def get(self, token: str) -> Optional[np.ndarray]:
        idx = self._vocabulary.get(token, None)
        return None if idx is None else self._vectors[idx]


def load_embedding_file(fpath: str) -> EmbeddingTable:
    vocabulary: Dict[str, int] = {}
    rows: List[np.ndarray] = []
    dim: Optional[int] = None
    duplicates: int = 0
    try:
        fin = open(fpath, "rt", encoding="utf-8")
    except OSError as e:
        raise HSKEmbeddingFileException(fpath, None, str(e))
    with fin:
        for lineno, line in enumerate(fin, start=1):
            parts = line.rstrip("\n").rstrip(" ").split(" ")
            if len(parts) == 1 and not parts[0]:
                continue
            token, coefficients = parts[0], parts[1:]
            if not coefficients:
                raise HSKEmbeddingFileException(fpath, lineno, f"Token '{token}' has no vector.")
            if dim is None:
                dim = len(coefficients)
            elif len(coefficients) != dim:
                raise HSKEmbeddingFileException(
                    fpath, lineno, f"Expected {dim} coefficients, found {len(coefficients)}.")
            try:
                vector = np.asarray(coefficients, dtype=np.float64)
            except ValueError as e:
                raise HSKEmbeddingFileException(fpath, lineno, f"Non-numeric coefficient. {e}")
            if not np.all(np.isfinite(vector)):
                raise HSKEmbeddingFileException(
                    fpath, lineno, f"Token '{token}' has a non-finite coefficient.")
            if token in vocabulary:
                duplicates += 1
                hsklogger.warning(f"Embedding file '{fpath}': token '{token}' at line {lineno} "
                                  f"is a duplicate, keeping its first occurrence.")
                continue
            vocabulary[token] = len(rows)
            rows.append(vector)
    if dim is None:
        raise HSKEmbeddingFileException(fpath, None, "The file contains no vectors.")
    hsklogger.debug(f"Loaded {len(rows)} vectors of dimension {dim} from '{fpath}' "
                    f"({duplicates} duplicates skipped).")
    return EmbeddingTable(dim, vocabulary, np.stack(rows), path=fpath)


def _gram_hash(gram: str, seed: int) -> Tuple[int, float]:
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8,
                             key=seed.to_bytes(8, "little")).digest()
    value = int.from_bytes(digest, "little")
    return value >> 1, (1.0 if value & 1 else -1.0)


def _char_grams(token: str, n: int) -> List[str]:
    padded = f"^{token}$"
    if len(padded) <= n:
        return [padded]
    return [padded[i:i + n] for i in range(len(padded) - n + 1)]


def embed_token(table: EmbeddingTable, cfg: CharFallbackConfig, token: str) -> np.ndarray:
    known = table.get(token)
    if known is not None:
        return known
    if cfg.dim != table.dim:
        raise ValueError(f"Fallback dimension {cfg.dim} differs from table dimension {table.dim}.")
    grams = _char_grams(token, cfg.ngram_len)
    vector = np.zeros(cfg.dim, dtype=np.float64)
    for gram in grams:
        bucket, sign = _gram_hash(gram, cfg.seed)
        vector[bucket % cfg.dim] += sign
    vector /= len(grams)
    if not vector.any():
        # every contribution cancelled out
        bucket, sign = _gram_hash(f"^{token}$", cfg.seed)
        vector[bucket % cfg.dim] = sign
    return vector * (table.mean_norm / np.linalg.norm(vector))


def embed_sequence(table: EmbeddingTable, cfg: CharFallbackConfig,
                   tokens: Sequence[str]) -> np.ndarray:
    if len(tokens) == 0:
        return np.zeros((0, table.dim), dtype=np.float64)
    return np.stack([embed_token(table, cfg, token) for token in tokens])


class Encoder:
    """
    Binds an embedding table to its fallback and caches the matrices of encoded posts.
    """

    def __init__(self, table: EmbeddingTable, fallback: CharFallbackConfig,
                 dtype: np.dtype = np.dtype(np.float64)):
        self.table = table
        self.fallback = fallback
        self.dtype = np.dtype(dtype)
        self._cache: Dict[Tuple[str, ...], np.ndarray] = {}

    @classmethod
    def from_config(cls, cfg: EmbeddingsConfig, dtype: np.dtype = np.dtype(np.float64)) \
            -> 'Encoder':
        table = load_embedding_file(cfg.path) if cfg.path else EmbeddingTable.empty(cfg.dim)
        fallback = CharFallbackConfig(dim=table.dim, ngram_len=cfg.ngram_len, seed=cfg.seed)
        return Encoder(table, fallback, dtype=dtype)

    @property
    def dim(self) -> int:
        return self.table.dim

    @staticmethod
    def tokens_for(tokens: Sequence[str]) -> Tuple[str, ...]:
        return tuple(tokens) or (EMPTY_TOKEN,)

    def encode(self, tokens: Sequence[str]) -> np.ndarray:
        key = self.tokens_for(tokens)
        matrix = self._cache.get(key, None)
        if matrix is None:
            matrix = embed_sequence(self.table, self.fallback, key).astype(self.dtype)
            matrix.setflags(write=False)
            self._cache[key] = matrix
        return matrix

    def describe(self) -> dict:
        return {
            "path": self.table.path,
            "dim": self.table.dim,
            "ngram_len": self.fallback.ngram_len,
            "seed": self.fallback.seed,
        }
