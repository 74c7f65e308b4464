import dataclasses
import json
import math
from enum import Enum
from typing import List, Dict, Optional, Iterator, Any, Sequence, Tuple

import numpy as np
import pandas as pd

from .exceptions import HSKDataException, HSKConfigException

Arguments = List[str]
TaskName = str
LabelId = int


@dataclasses.dataclass(frozen=True)
class RawPost:
    id: str
    text: str
    label: str
    task: TaskName

    def __post_init__(self):
        if not self.id:
            raise HSKDataException(f"Post of task '{self.task}' has an empty id.")


@dataclasses.dataclass(frozen=True)
class CleanPost:
    id: str
    tokens: Sequence[str]
    label_id: LabelId
    task: TaskName

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclasses.dataclass
class TaskSpec:
    name: TaskName
    labels: List[str]
    path: Optional[str] = None
    fraction: float = 1.0

    def __post_init__(self):
        if len(self.labels) < 2:
            raise HSKDataException(f"Task '{self.name}' must declare at least 2 labels.")
        if len(set(self.labels)) != len(self.labels):
            raise HSKDataException(f"Task '{self.name}' declares duplicate labels: {self.labels}.")
        if not (0.0 < self.fraction <= 1.0):
            raise HSKDataException(f"Task '{self.name}' has a training fraction outside (0, 1].")

    @property
    def num_labels(self) -> int:
        return len(self.labels)

    def label_id(self, label: str) -> LabelId:
        try:
            return self.labels.index(label)
        except ValueError:
            raise HSKDataException(f"Label '{label}' is not in the label set of task "
                                   f"'{self.name}' ({', '.join(self.labels)}).")

    def as_dict(self) -> dict:
        return {"name": self.name, "labels": list(self.labels)}


class TrainMode(Enum):
    SINGLE = "single"
    TRANSFER = "transfer"


class Precision(Enum):
    FLOAT64 = "float64"
    FLOAT32 = "float32"

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(self.value)


@dataclasses.dataclass
class EmbeddingsConfig:
    path: Optional[str] = None
    dim: int = 8
    ngram_len: int = 3
    seed: int = 0


@dataclasses.dataclass
class TrainConfig:
    tasks: List[TaskSpec]
    hidden_size: int = 64
    batch_size: int = 32
    epochs: int = 300
    lr: float = 0.001
    weight_decay: float = 0.001
    eval_every: int = 10
    seed: int = 0
    mode: TrainMode = TrainMode.SINGLE
    layers: int = 2
    split_ratio: float = 0.9
    precision: Precision = Precision.FLOAT64
    embeddings: EmbeddingsConfig = dataclasses.field(default_factory=EmbeddingsConfig)

    @property
    def task_names(self) -> List[TaskName]:
        return [task.name for task in self.tasks]

    def task(self, name: TaskName) -> TaskSpec:
        for task in self.tasks:
            if task.name == name:
                return task
        raise HSKConfigException(None, f"Task '{name}' is not declared.")

    def as_flat_dict(self) -> Dict[str, Any]:
        flat: Dict[str, Any] = {
            "hidden_size": self.hidden_size,
            "batch_size": self.batch_size,
            "epochs": self.epochs,
            "lr": self.lr,
            "weight_decay": self.weight_decay,
            "eval_every": self.eval_every,
            "seed": self.seed,
            "mode": self.mode.value,
            "layers": self.layers,
            "split_ratio": self.split_ratio,
            "precision": self.precision.value,
            "embeddings.dim": self.embeddings.dim,
            "embeddings.ngram_len": self.embeddings.ngram_len,
            "embeddings.seed": self.embeddings.seed,
        }
        if self.embeddings.path is not None:
            flat["embeddings.path"] = self.embeddings.path
        for task in self.tasks:
            flat[f"task.{task.name}.path"] = task.path
            flat[f"task.{task.name}.labels"] = list(task.labels)
            flat[f"task.{task.name}.fraction"] = task.fraction
        return flat


@dataclasses.dataclass
class HistoryPoint:
    epoch: int
    loss: float
    macro_f1: Dict[TaskName, float]

    @property
    def mean_f1(self) -> float:
        return float(np.mean(list(self.macro_f1.values())))


@dataclasses.dataclass
class TrainHistory:
    points: List[HistoryPoint] = dataclasses.field(default_factory=list)

    def append(self, point: HistoryPoint):
        if self.points and point.epoch <= self.points[-1].epoch:
            raise ValueError(f"History epochs must be strictly increasing, got {point.epoch} "
                             f"after {self.points[-1].epoch}.")
        self.points.append(point)

    def __iter__(self) -> Iterator[HistoryPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def rows(self) -> Iterator[List[Any]]:
        for point in self.points:
            for task, score in point.macro_f1.items():
                yield [point.epoch, task, repr(score), repr(point.loss)]

    def write_csv(self, fpath: str):
        pd.DataFrame(list(self.rows()), columns=["epoch", "task", "macro_f1", "loss"]).to_csv(
            fpath, index=False, lineterminator="\n")


@dataclasses.dataclass
class ConfusionMatrix:
    counts: np.ndarray
    labels: List[str]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def normalized(self) -> np.ndarray:
        rows = self.counts.sum(axis=1, keepdims=True).astype(np.float64)
        return np.divide(self.counts, rows, out=np.zeros(self.counts.shape), where=rows > 0)

    def most_confused(self) -> List[Tuple[str, str, float]]:
        """
        For every gold label with support, the other label it is most often predicted as
        and the share of its samples that went there.
        """
        shares = self.normalized()
        np.fill_diagonal(shares, -1.0)
        found = []
        for k, label in enumerate(self.labels):
            if self.counts[k].sum() == 0 or len(self.labels) < 2:
                continue
            j = int(np.argmax(shares[k]))
            found.append((label, self.labels[j], float(max(shares[k, j], 0.0))))
        return found

    def as_frame(self, normalized: bool = False) -> pd.DataFrame:
        frame = pd.DataFrame(self.normalized() if normalized else self.counts,
                             index=self.labels, columns=self.labels)
        frame.index.name = "gold\\pred"
        return frame

    def write_csv(self, fpath: str, normalized: bool = False):
        self.as_frame(normalized).to_csv(fpath, lineterminator="\n")


@dataclasses.dataclass
class EvalReport:
    task: TaskName
    labels: List[str]
    precision: List[float]
    recall: List[float]
    f1: List[float]
    support: List[int]
    macro_f1: float
    confusion: ConfusionMatrix
    runs: List[float] = dataclasses.field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.runs)) if self.runs else self.macro_f1

    @property
    def std(self) -> float:
        return float(np.std(self.runs)) if self.runs else 0.0

    def as_dict(self) -> dict:
        return {
            "task": self.task,
            "macro_f1": self.macro_f1,
            "mean": self.mean,
            "std": self.std,
            "runs": list(self.runs),
            "per_class": {
                label: {
                    "precision": self.precision[i],
                    "recall": self.recall[i],
                    "f1": self.f1[i],
                    "support": self.support[i],
                } for i, label in enumerate(self.labels)
            },
            "confusion": self.confusion.counts.tolist(),
            "confusion_normalized": self.confusion.normalized().tolist(),
        }


@dataclasses.dataclass
class HighlightReport:
    tokens: List[str]
    scores: List[float]
    predicted: str
    gold: str
    task: TaskName

    def __post_init__(self):
        if len(self.tokens) != len(self.scores):
            raise ValueError("A highlight report needs exactly one score per token.")
        if self.tokens and not math.isclose(sum(self.scores), 1.0, abs_tol=1e-12):
            raise ValueError("Highlight scores must sum to 1.")


@dataclasses.dataclass
class MapPoint:
    x: float
    y: float
    task: TaskName
    gold: str
    predicted: str
    id: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Map point '{self.id}' has non-finite coordinates.")

    @property
    def correct(self) -> bool:
        return self.gold == self.predicted


@dataclasses.dataclass
class RunManifest:
    config: Dict[str, Any]
    digests: Dict[str, str]
    seed: int
    version: str
    artifacts: Dict[str, str] = dataclasses.field(default_factory=dict)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def write(self, fpath: str):
        with open(fpath, "wt") as fout:
            json.dump(self.as_dict(), fout, indent=4, sort_keys=True)
            fout.write("\n")
