import json
import os
from typing import List, Sequence, Dict, Protocol, Tuple, Callable

import numpy as np
import pandas as pd
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

from .cli.logger import hsklogger
from .constants import DEFAULT_REPETITIONS
from .exceptions import HSKDataException
from .sampling import TaskData, prepare_task
from .types import ConfusionMatrix, EvalReport, TaskSpec, CleanPost, TaskName

# (task, posts) -> predicted label ids
Predictor = Callable[[TaskName, Sequence[CleanPost]], List[int]]


class Learner(Protocol):

    def fit(self, tasks: Sequence[TaskData], seed: int) -> Predictor:
        ...


def _check_labels(gold: Sequence[int], pred: Sequence[int], num_labels: int):
    if len(gold) != len(pred):
        raise HSKDataException(f"Gold ({len(gold)}) and predicted ({len(pred)}) label lists "
                               f"have different lengths.")
    if len(gold) == 0:
        raise HSKDataException("Cannot score an empty set of predictions.")
    for label in [*gold, *pred]:
        if not (0 <= label < num_labels):
            raise HSKDataException(f"Label {label} is out of range for {num_labels} labels.")


def macro_f1(gold: Sequence[int], pred: Sequence[int], num_labels: int) -> float:
    """
    Unweighted mean of the per-class F1 over the classes that occur in `gold` or `pred`.
    Predicted-but-absent and absent-but-expected classes score 0.
    """
    _check_labels(gold, pred, num_labels)
    present = sorted(set(gold) | set(pred))
    return float(precision_recall_fscore_support(
        gold, pred, labels=present, average="macro", zero_division=0)[2])


def confusion(gold: Sequence[int], pred: Sequence[int], num_labels: int,
              label_names: Sequence[str] = None) -> ConfusionMatrix:
    _check_labels(gold, pred, num_labels)
    names = list(label_names) if label_names is not None else [str(k) for k in range(num_labels)]
    counts = confusion_matrix(gold, pred, labels=list(range(num_labels)))
    return ConfusionMatrix(counts=counts.astype(np.int64), labels=names)


def evaluate(gold: Sequence[int], pred: Sequence[int], task: TaskSpec) -> EvalReport:
    K = task.num_labels
    cm = confusion(gold, pred, K, task.labels)
    precision, recall, f1, support = precision_recall_fscore_support(
        gold, pred, labels=list(range(K)), average=None, zero_division=0)
    return EvalReport(
        task=task.name,
        labels=list(task.labels),
        precision=[float(v) for v in precision],
        recall=[float(v) for v in recall],
        f1=[float(v) for v in f1],
        support=[int(v) for v in support],
        macro_f1=macro_f1(gold, pred, K),
        confusion=cm,
    )


def repeated_experiment(learner: Learner, tasks: Sequence[Tuple[TaskSpec, Sequence[CleanPost]]],
                        repetitions: int = DEFAULT_REPETITIONS, ratio: float = 0.9) \
        -> Dict[TaskName, EvalReport]:
    """
    Runs split, fit and test once per seed `0..repetitions-1`. The returned reports hold
    the per-run macro-F1 scores; per-class scores and confusion are computed on the
    predictions of all runs pooled together.
    """
    if repetitions < 1:
        raise ValueError("At least one repetition is needed.")
    runs: Dict[TaskName, List[float]] = {spec.name: [] for spec, _ in tasks}
    pooled: Dict[TaskName, Tuple[List[int], List[int]]] = {spec.name: ([], []) for spec, _ in tasks}
    for seed in range(repetitions):
        prepared = [prepare_task(spec, posts, seed, ratio) for spec, posts in tasks]
        predictor = learner.fit(prepared, seed)
        for data in prepared:
            gold = [post.label_id for post in data.valid]
            pred = predictor(data.name, data.valid)
            score = macro_f1(gold, pred, data.spec.num_labels)
            runs[data.name].append(score)
            pooled[data.name][0].extend(gold)
            pooled[data.name][1].extend(pred)
            hsklogger.info(f"Run {seed}: task '{data.name}' macro-F1 = {score:.4f}")
    reports: Dict[TaskName, EvalReport] = {}
    for spec, _ in tasks:
        report = evaluate(*pooled[spec.name], spec)
        report.runs = runs[spec.name]
        reports[spec.name] = report
    return reports


def write_reports(reports: Dict[TaskName, EvalReport], out_dir: str):
    """
    Writes `runs.csv` (run,task,macro_f1), `summary.json` and, per task, the confusion
    grid of counts next to its row-normalized view.
    """
    os.makedirs(out_dir, exist_ok=True)
    runs = [[run, task, repr(score)] for task, report in reports.items()
            for run, score in enumerate(report.runs or [report.macro_f1])]
    pd.DataFrame(runs, columns=["run", "task", "macro_f1"]).to_csv(
        os.path.join(out_dir, "runs.csv"), index=False, lineterminator="\n")
    with open(os.path.join(out_dir, "summary.json"), "wt") as fout:
        json.dump({task: report.as_dict() for task, report in reports.items()},
                  fout, indent=4, sort_keys=True)
        fout.write("\n")
    for task, report in reports.items():
        report.confusion.write_csv(os.path.join(out_dir, f"confusion.{task}.csv"))
        report.confusion.write_csv(os.path.join(out_dir, f"confusion.{task}.normalized.csv"),
                                   normalized=True)
