import dataclasses
import math
from collections import defaultdict
from typing import List, Dict, Tuple, Sequence, Union, Optional, Mapping

import numpy as np

from .exceptions import HSKDataException
from .types import CleanPost, TaskSpec, TaskName, LabelId
from .utils.misc import as_rng, make_rng, STREAM_SPLIT, STREAM_SUBSAMPLE

Seed = Union[int, np.random.Generator]
Batch = List[Tuple[CleanPost, TaskName]]


@dataclasses.dataclass
class TaskData:
    spec: TaskSpec
    train: List[CleanPost]
    valid: List[CleanPost]

    @property
    def name(self) -> TaskName:
        return self.spec.name


def _by_class(samples: Sequence[CleanPost]) -> Dict[LabelId, List[int]]:
    classes: Dict[LabelId, List[int]] = defaultdict(list)
    for idx, sample in enumerate(samples):
        classes[sample.label_id].append(idx)
    return dict(sorted(classes.items()))


def oversample(samples: Sequence[CleanPost], seed: Seed,
               num_labels: Optional[int] = None) -> List[CleanPost]:
    """
    Duplicates minority-class samples (uniformly, with replacement) until every class has
    as many samples as the majority class. The result is shuffled.
    """
    if len(samples) == 0:
        raise HSKDataException("Cannot oversample an empty set of samples.")
    rng = as_rng(seed)
    classes = _by_class(samples)
    if num_labels is not None:
        missing = [k for k in range(num_labels) if k not in classes]
        if missing:
            raise HSKDataException(f"Cannot oversample, classes {missing} have no samples.")
    majority = max(len(indices) for indices in classes.values())
    picked: List[int] = []
    for indices in classes.values():
        picked.extend(indices)
        if len(indices) < majority:
            picked.extend(rng.choice(indices, size=majority - len(indices), replace=True).tolist())
    order = rng.permutation(len(picked))
    return [samples[picked[i]] for i in order]


def stratified_split(samples: Sequence[CleanPost], ratio: float = 0.9, seed: Seed = 0) \
        -> Tuple[List[CleanPost], List[CleanPost]]:
    """
    Splits every class independently, `round(ratio * count)` samples go to the train side
    (at least one sample on each side). Both sides keep the input order.
    """
    if not (0.0 < ratio < 1.0):
        raise ValueError(f"Split ratio must be in (0, 1), got {ratio}.")
    rng = as_rng(seed)
    in_train = np.zeros(len(samples), dtype=bool)
    for label, indices in _by_class(samples).items():
        if len(indices) < 2:
            raise HSKDataException(f"Class {label} has {len(indices)} sample(s), at least 2 are "
                                   f"needed to appear on both sides of a split.")
        n_train = min(max(int(math.floor(ratio * len(indices) + 0.5)), 1), len(indices) - 1)
        chosen = rng.permutation(len(indices))[:n_train]
        in_train[np.asarray(indices)[chosen]] = True
    train = [s for s, keep in zip(samples, in_train) if keep]
    test = [s for s, keep in zip(samples, in_train) if not keep]
    return train, test


def subsample(samples: Sequence[CleanPost], fraction: float, seed: Seed) -> List[CleanPost]:
    """
    Keeps `ceil(fraction * count)` samples of every class (at least one), in input order.
    """
    if not (0.0 < fraction <= 1.0):
        raise ValueError(f"Fraction must be in (0, 1], got {fraction}.")
    if fraction == 1.0:
        return list(samples)
    rng = as_rng(seed)
    keep = np.zeros(len(samples), dtype=bool)
    for indices in _by_class(samples).values():
        n_keep = max(1, int(math.ceil(fraction * len(indices))))
        chosen = rng.permutation(len(indices))[:n_keep]
        keep[np.asarray(indices)[chosen]] = True
    return [s for s, k in zip(samples, keep) if k]


def prepare_task(spec: TaskSpec, posts: Sequence[CleanPost], seed: int,
                 ratio: float = 0.9) -> TaskData:
    train, valid = stratified_split(posts, ratio, make_rng(seed, STREAM_SPLIT))
    train = subsample(train, spec.fraction, make_rng(seed, STREAM_SUBSAMPLE))
    return TaskData(spec=spec, train=train, valid=valid)


def mixed_batches(tasks: Mapping[TaskName, Sequence[CleanPost]], batch_size: int,
                  seed: Seed) -> List[Batch]:
    """
    One epoch of batches: a seeded shuffle of the concatenation of all the tasks'
    training sets, cut in chunks of `batch_size` (the last one may be shorter).
    """
    if batch_size < 1:
        raise ValueError("Batch size must be positive.")
    union: Batch = [(sample, task) for task, samples in tasks.items() for sample in samples]
    if not union:
        raise HSKDataException("Cannot build batches, no task has training samples.")
    order = as_rng(seed).permutation(len(union))
    shuffled = [union[i] for i in order]
    return [shuffled[i:i + batch_size] for i in range(0, len(shuffled), batch_size)]


SPLITS = ("train", "test", "all")


def select_split(spec: TaskSpec, posts: Sequence[CleanPost], split: str, seed: int,
                 ratio: float = 0.9) -> List[CleanPost]:
    """
    Posts of one side of the split used for training with `seed`, or the whole corpus.
    """
    if split not in SPLITS:
        raise ValueError(f"Unknown split '{split}', expected one of {', '.join(SPLITS)}.")
    if split == "all":
        return list(posts)
    data = prepare_task(spec, posts, seed, ratio)
    return data.train if split == "train" else data.valid
