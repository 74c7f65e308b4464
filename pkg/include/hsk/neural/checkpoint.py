"""
Binary checkpoint format.

    offset 0   8 bytes   magic `HSKCKPT\\0`
    offset 8   4 bytes   little-endian uint32, length L of the header
    offset 12  L bytes   UTF-8 JSON header (sorted keys)
    offset 12+L          parameters as little-endian float64, arrays in the order of
                         `ModelParams.arrays()`, each flattened in C order

The header holds the format version, input dimension, hidden size, number of layers,
the numeric precision, the task table (names and label names, in head order), the
embedding settings and the selection epoch and score.
"""
import dataclasses
import json
import struct
from typing import List, Dict, Optional

import numpy as np

from .head import HeadParams
from .lstm import BiLstmLayer, LstmParams
from .model import ModelParams
from ..constants import CHECKPOINT_MAGIC, CHECKPOINT_FORMAT
from ..exceptions import HSKException, HSKCheckpointException, HSKTaskTableMismatchException
from ..types import TaskSpec, TaskName
from ..utils.semver import SemanticVersion

_LENGTH = struct.Struct("<I")


@dataclasses.dataclass
class Checkpoint:
    params: ModelParams
    tasks: List[TaskSpec]
    embeddings: Dict[str, object] = dataclasses.field(default_factory=dict)
    epoch: int = 0
    score: float = 0.0

    def __post_init__(self):
        if [t.name for t in self.tasks] != list(self.params.heads.keys()):
            raise HSKCheckpointException(None, "The task table does not match the model heads.")

    @property
    def task_names(self) -> List[TaskName]:
        return [task.name for task in self.tasks]

    def task(self, name: TaskName) -> TaskSpec:
        for task in self.tasks:
            if task.name == name:
                return task
        raise HSKTaskTableMismatchException(self.task_names, [name])

    def check_tasks(self, tasks: List[TaskSpec]):
        given = [task.name for task in tasks]
        for task in tasks:
            if task.name not in self.task_names:
                raise HSKTaskTableMismatchException(self.task_names, given,
                                                    f"Unknown task '{task.name}'.")
            known = self.task(task.name)
            if list(known.labels) != list(task.labels):
                raise HSKTaskTableMismatchException(
                    self.task_names, given,
                    f"Task '{task.name}' has labels [{', '.join(task.labels)}], the checkpoint "
                    f"expects [{', '.join(known.labels)}].")

    def header(self) -> dict:
        return {
            "format": CHECKPOINT_FORMAT,
            "input_dim": self.params.input_dim,
            "hidden_size": self.params.hidden,
            "layers": self.params.num_layers,
            "precision": str(self.params.dtype),
            "tasks": [task.as_dict() for task in self.tasks],
            "embeddings": self.embeddings,
            "epoch": self.epoch,
            "score": self.score,
        }

    def to_bytes(self) -> bytes:
        header = json.dumps(self.header(), sort_keys=True).encode("utf-8")
        payload = b"".join(
            np.ascontiguousarray(a, dtype="<f8").tobytes(order="C")
            for a in self.params.arrays().values()
        )
        return CHECKPOINT_MAGIC + _LENGTH.pack(len(header)) + header + payload

    @classmethod
    def from_bytes(cls, data: bytes, path: Optional[str] = None) -> 'Checkpoint':
        prefix = len(CHECKPOINT_MAGIC) + _LENGTH.size
        if len(data) < prefix or not data.startswith(CHECKPOINT_MAGIC):
            raise HSKCheckpointException(path, "Not a checkpoint file (bad magic).")
        (length,) = _LENGTH.unpack_from(data, len(CHECKPOINT_MAGIC))
        try:
            header = json.loads(data[prefix:prefix + length].decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise HSKCheckpointException(path, f"Corrupted header. {e}")
        try:
            version = SemanticVersion.parse(header.get("format", "0"))
        except SemanticVersion.Invalid as e:
            raise HSKCheckpointException(path, str(e))
        if not version.is_readable_by(SemanticVersion.parse(CHECKPOINT_FORMAT)):
            raise HSKCheckpointException(path, f"Format version {version} is not supported, "
                                               f"this version reads {CHECKPOINT_FORMAT}.")
        try:
            tasks = [TaskSpec(name=t["name"], labels=list(t["labels"])) for t in header["tasks"]]
            dtype = np.dtype(header.get("precision", "float64"))
            # build a zero model with the right shapes, then fill it in array order
            d, H, L = int(header["input_dim"]), int(header["hidden_size"]), int(header["layers"])
            params = ModelParams(
                trunk=[
                    BiLstmLayer(forward=LstmParams.zeros(d if i == 0 else 2 * H, H, dtype),
                                backward=LstmParams.zeros(d if i == 0 else 2 * H, H, dtype))
                    for i in range(L)
                ],
                heads={t.name: HeadParams.zeros(H, t.num_labels, dtype) for t in tasks},
            )
        except (KeyError, TypeError, ValueError, HSKException) as e:
            raise HSKCheckpointException(path, f"Incomplete header. {e}")
        arrays = params.arrays()
        expected = sum(a.size for a in arrays.values())
        available = len(data) - prefix - length
        if available != 8 * expected:
            raise HSKCheckpointException(path, f"Expected {8 * expected} bytes of parameters, "
                                               f"found {available}.")
        payload = np.frombuffer(data, dtype="<f8", offset=prefix + length)
        offset = 0
        for array in arrays.values():
            array[...] = payload[offset:offset + array.size].reshape(array.shape)
            offset += array.size
        return Checkpoint(params=params, tasks=tasks, embeddings=header.get("embeddings", {}),
                          epoch=int(header.get("epoch", 0)), score=float(header.get("score", 0.0)))

    def save(self, fpath: str):
        with open(fpath, "wb") as fout:
            fout.write(self.to_bytes())

    @classmethod
    def load(cls, fpath: str) -> 'Checkpoint':
        try:
            with open(fpath, "rb") as fin:
                data = fin.read()
        except OSError as e:
            raise HSKCheckpointException(fpath, str(e))
        return cls.from_bytes(data, path=fpath)
