import argparse
import os
from typing import Optional

from .. import AbstractCLICommand
from ..logger import hsklogger
from ..utils import combine_args, int_list
from ...config import load_config
from ...embeddings import Encoder
from ...preprocess import load_task_corpora
from ...training import grid_search, write_grid_csv, prepare_tasks
from ...types import Arguments


class CLIGridCommand(AbstractCLICommand):

    KEY = 'grid'

    @staticmethod
    def parser(parent: Optional[argparse.ArgumentParser] = None,
               args: Optional[Arguments] = None) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(parents=[parent])
        parser.add_argument(
            "config",
            help="Training configuration file (YAML), used as template for every cell"
        )
        parser.add_argument(
            "--hidden",
            type=int_list,
            required=True,
            help="Comma-separated hidden sizes, e.g. 32,64,128"
        )
        parser.add_argument(
            "--batch",
            type=int_list,
            required=True,
            help="Comma-separated batch sizes, e.g. 16,32"
        )
        parser.add_argument(
            "-j",
            "--jobs",
            type=int,
            default=1,
            help="Number of cells trained in parallel"
        )
        parser.add_argument(
            "-o",
            "--output",
            default="grid.csv",
            help="Destination of the results table"
        )
        return parser

    @staticmethod
    def execute(parsed: argparse.Namespace, **kwargs) -> bool:
        # combine arguments
        parsed = combine_args(parsed, kwargs)
        # ---
        if parsed.jobs < 1:
            hsklogger.error("The number of jobs must be positive.")
            return False
        config = load_config(parsed.config)
        tasks = prepare_tasks(config, load_task_corpora(config.tasks))
        encoder = Encoder.from_config(config.embeddings, config.precision.dtype)
        hsklogger.info(f"Grid search over {len(parsed.hidden) * len(parsed.batch)} cells...")
        rows = grid_search(config, parsed.hidden, parsed.batch, tasks, encoder, jobs=parsed.jobs)
        write_grid_csv(rows, parsed.output)
        for row in rows:
            print(f"hidden_size={row.hidden_size:<6d} batch_size={row.batch_size:<6d} "
                  f"macro_f1={row.macro_f1:.4f}")
        hsklogger.info(f"Results written to '{os.path.abspath(parsed.output)}'.")
        # ---
        return True
