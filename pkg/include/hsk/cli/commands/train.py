import argparse
import os
from pathlib import Path
from typing import Optional

from .. import AbstractCLICommand
from ..logger import hsklogger
from ..utils import combine_args, as_table
from ...config import load_config
from ...embeddings import Encoder
from ...preprocess import load_task_corpora
from ...run import HSKRun
from ...training import train, prepare_tasks
from ...types import Arguments


class CLITrainCommand(AbstractCLICommand):

    KEY = 'train'

    @staticmethod
    def parser(parent: Optional[argparse.ArgumentParser] = None,
               args: Optional[Arguments] = None) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(parents=[parent])
        parser.add_argument(
            "config",
            help="Training configuration file (YAML)"
        )
        parser.add_argument(
            "-o",
            "--output",
            default=None,
            help="Run directory (default: runs/<config name>)"
        )
        return parser

    @staticmethod
    def execute(parsed: argparse.Namespace, **kwargs) -> bool:
        # combine arguments
        parsed = combine_args(parsed, kwargs)
        # ---
        config = load_config(parsed.config)
        output = parsed.output or os.path.join("runs", Path(parsed.config).stem)
        run = HSKRun(output, config)
        run.begin()
        # data
        tasks = prepare_tasks(config, load_task_corpora(config.tasks))
        encoder = Encoder.from_config(config.embeddings, config.precision.dtype)
        for data in tasks:
            hsklogger.info(f"Task '{data.name}': {len(data.train)} training and "
                           f"{len(data.valid)} validation posts.")
        # train
        checkpoint, history = train(config, tasks, encoder, progress=not parsed.quiet)
        run.save_checkpoint(checkpoint)
        run.save_history(history)
        # summary
        info: dict = {
            "Mode": config.mode.value,
            "Best epoch": checkpoint.epoch,
            "Mean macro-F1": f"{checkpoint.score:.4f}",
            "Run directory": run.path,
        }
        print(as_table(info, "Training"))
        # ---
        return True
