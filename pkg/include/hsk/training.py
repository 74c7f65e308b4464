import dataclasses
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Tuple, Sequence, Dict, Optional

import pandas as pd

from .cli.logger import hsklogger
from .config import validate_config
from .embeddings import Encoder
from .evaluation import macro_f1, Predictor
from .exceptions import HSKConfigException, HSKNumericalException, HSKDataException, \
    HSKShapeException
from .neural.adam import AdamHyper, AdamState, adam_step
from .neural.checkpoint import Checkpoint
from .neural.model import ModelParams, init_model, model_gradients, model_forward
from .sampling import TaskData, oversample, mixed_batches, stratified_split, prepare_task
from .types import TrainConfig, TrainHistory, HistoryPoint, TrainMode, CleanPost, TaskName, \
    TaskSpec
from .utils.misc import make_rng, human_time, STREAM_INIT, STREAM_OVERSAMPLE, STREAM_BATCHES, \
    STREAM_VALIDATION
from .utils.progress_bar import ProgressBar


def predict_posts(params: ModelParams, encoder: Encoder, task: TaskName,
                  posts: Sequence[CleanPost]) -> List[int]:
    return [model_forward(params, encoder.encode(post.tokens), task).predicted for post in posts]


def prepare_tasks(config: TrainConfig, corpora: Sequence[Tuple[TaskSpec, Sequence[CleanPost]]]) \
        -> List[TaskData]:
    return [prepare_task(spec, posts, config.seed, config.split_ratio) for spec, posts in corpora]


def train(config: TrainConfig, tasks: Sequence[TaskData], encoder: Encoder,
          progress: bool = False) -> Tuple[Checkpoint, TrainHistory]:
    """
    Trains a shared bi-LSTM trunk with one head per task on mixed batches, evaluating
    every `eval_every` epochs. Returns the checkpoint with the best mean validation
    macro-F1 across tasks (earliest on ties) and the evaluation history.
    """
    validate_config(config)
    if config.mode is TrainMode.TRANSFER and len(tasks) == 1:
        hsklogger.warning("Transfer mode with a single task, training as single-task.")
    specs = [data.spec for data in tasks]
    dtype = config.precision.dtype
    params = init_model(encoder.dim, config.hidden_size, specs,
                        make_rng(config.seed, STREAM_INIT), layers=config.layers, dtype=dtype)
    arrays = params.arrays()
    state = AdamState.for_params(arrays)
    hyper = AdamHyper(lr=config.lr, weight_decay=config.weight_decay)
    # oversampling happens once, on the train side only
    balanced: Dict[TaskName, List[CleanPost]] = {
        data.name: oversample(data.train, make_rng(config.seed, STREAM_OVERSAMPLE, idx),
                              data.spec.num_labels)
        for idx, data in enumerate(tasks)
    }
    for data in tasks:
        if not data.valid:
            raise HSKDataException(f"Task '{data.name}' has no validation samples.")
    history = TrainHistory()
    best: Optional[Tuple[float, int, ModelParams]] = None
    pbar = ProgressBar(config.epochs, enabled=progress)
    stime = time.time()
    for epoch in range(1, config.epochs + 1):
        batches = mixed_batches(balanced, config.batch_size,
                                make_rng(config.seed, STREAM_BATCHES, epoch))
        total, count = 0.0, 0
        for batch in batches:
            samples = [(encoder.encode(post.tokens), post.label_id, task) for post, task in batch]
            loss, grads = model_gradients(params, samples)
            if not math.isfinite(loss):
                raise HSKNumericalException(f"Loss became {loss} at epoch {epoch}. "
                                            f"Try a smaller learning rate.")
            adam_step(arrays, grads.arrays(), state, hyper)
            total += loss * len(batch)
            count += len(batch)
        epoch_loss = total / count
        hsklogger.debug(f"Epoch {epoch}: mean training loss {epoch_loss:.6f}")
        pbar.set_status(f"loss={epoch_loss:.4f}")
        pbar.step(epoch)
        if epoch % config.eval_every == 0:
            scores = {
                data.name: macro_f1([p.label_id for p in data.valid],
                                    predict_posts(params, encoder, data.name, data.valid),
                                    data.spec.num_labels)
                for data in tasks
            }
            point = HistoryPoint(epoch=epoch, loss=epoch_loss, macro_f1=scores)
            history.append(point)
            if best is None or point.mean_f1 > best[0]:
                best = (point.mean_f1, epoch, params.copy())
            hsklogger.debug(f"Epoch {epoch}: validation macro-F1 " +
                            ", ".join(f"{t}={s:.4f}" for t, s in scores.items()))
    pbar.done()
    score, epoch, best_params = best
    hsklogger.info(f"Training completed in {human_time(time.time() - stime)}. Best mean "
                   f"validation macro-F1 {score:.4f} at epoch {epoch}.")
    checkpoint = Checkpoint(params=best_params, tasks=specs, embeddings=encoder.describe(),
                            epoch=epoch, score=score)
    return checkpoint, history


@dataclasses.dataclass
class GridCell:
    hidden_size: int
    batch_size: int
    macro_f1: float


def _grid_cell(args: Tuple[TrainConfig, Sequence[TaskData], Encoder]) -> float:
    config, tasks, encoder = args
    checkpoint, _ = train(config, tasks, encoder)
    return checkpoint.score


def grid_search(config: TrainConfig, hidden_sizes: Sequence[int], batch_sizes: Sequence[int],
                tasks: Sequence[TaskData], encoder: Encoder, jobs: int = 1) -> List[GridCell]:
    """
    Trains one model per (hidden size, batch size) pair, rows in grid order.
    Cells share no state and may run in parallel worker processes.
    """
    if not hidden_sizes or not batch_sizes:
        raise HSKConfigException(None, "Grid search needs at least one hidden size and one "
                                       "batch size.")
    cells = [(H, B) for H in hidden_sizes for B in batch_sizes]
    jobs_args = [(dataclasses.replace(config, hidden_size=H, batch_size=B), tasks, encoder)
                 for H, B in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            scores = list(executor.map(_grid_cell, jobs_args))
    else:
        scores = [_grid_cell(args) for args in jobs_args]
    rows = [GridCell(hidden_size=H, batch_size=B, macro_f1=s) for (H, B), s in zip(cells, scores)]
    best = max(rows, key=lambda r: r.macro_f1)
    hsklogger.info(f"Best grid cell: hidden_size={best.hidden_size}, "
                   f"batch_size={best.batch_size}, macro-F1={best.macro_f1:.4f}")
    return rows


def write_grid_csv(rows: Sequence[GridCell], fpath: str):
    table = [[row.hidden_size, row.batch_size, repr(row.macro_f1)] for row in rows]
    pd.DataFrame(table, columns=["hidden_size", "batch_size", "macro_f1"]).to_csv(
        fpath, index=False, lineterminator="\n")


class DeepHateLearner:
    """
    Trains DeepHate (one task) or t-DeepHate (several tasks, transfer mode) on the
    training sides handed over by the repeated protocol. Model selection uses an inner
    stratified split of the training side, or the training side itself when a class is
    too small to be split.
    """

    def __init__(self, config: TrainConfig, encoder: Encoder):
        self.config = config
        self.encoder = encoder

    def _inner(self, data: TaskData, seed: int) -> TaskData:
        try:
            train, valid = stratified_split(data.train, self.config.split_ratio,
                                            make_rng(seed, STREAM_VALIDATION))
        except HSKDataException:
            return TaskData(spec=data.spec, train=data.train, valid=data.train)
        return TaskData(spec=data.spec, train=train, valid=valid)

    def fit(self, tasks: Sequence[TaskData], seed: int) -> Predictor:
        config = dataclasses.replace(self.config, seed=seed)
        checkpoint, _ = train(config, [self._inner(data, seed) for data in tasks], self.encoder)
        params, encoder = checkpoint.params, self.encoder

        def predictor(task: TaskName, posts: Sequence[CleanPost]) -> List[int]:
            return predict_posts(params, encoder, task, posts)

        return predictor


def open_checkpoint(fpath: str, config: TrainConfig) -> Tuple[Checkpoint, Encoder]:
    """
    Loads a checkpoint together with the encoder described by `config`, making sure the
    two agree on tasks, labels and embedding dimension.
    """
    checkpoint = Checkpoint.load(fpath)
    checkpoint.check_tasks(config.tasks)
    encoder = Encoder.from_config(config.embeddings, checkpoint.params.dtype)
    if encoder.dim != checkpoint.params.input_dim:
        raise HSKShapeException(f"The checkpoint expects {checkpoint.params.input_dim}-dimensional "
                                f"word vectors, the configured embeddings have {encoder.dim}.")
    return checkpoint, encoder
