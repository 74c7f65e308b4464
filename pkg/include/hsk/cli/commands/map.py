import argparse
import os
from typing import Optional

from .. import AbstractCLICommand
from ..logger import hsklogger
from ..utils import combine_args
from ...config import load_config
from ...constants import TSNE_PERPLEXITY, TSNE_ITERATIONS
from ...interpret import build_map, render_map, write_coordinates
from ...preprocess import load_task_corpora
from ...sampling import select_split, SPLITS
from ...training import open_checkpoint
from ...types import Arguments


class CLIMapCommand(AbstractCLICommand):

    KEY = 'map'

    @staticmethod
    def parser(parent: Optional[argparse.ArgumentParser] = None,
               args: Optional[Arguments] = None) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(parents=[parent])
        parser.add_argument(
            "checkpoint",
            help="Checkpoint file produced by `hsk train`"
        )
        parser.add_argument(
            "config",
            help="Configuration describing the tasks and their data"
        )
        parser.add_argument(
            "--split",
            default="test",
            choices=SPLITS,
            help="Side of the seeded split whose posts are placed on the map"
        )
        parser.add_argument(
            "--perplexity",
            type=float,
            default=TSNE_PERPLEXITY,
            help="t-SNE perplexity"
        )
        parser.add_argument(
            "--iterations",
            type=int,
            default=TSNE_ITERATIONS,
            help="t-SNE iterations"
        )
        parser.add_argument(
            "-o",
            "--output",
            default="map.svg",
            help="Destination SVG file, coordinates are written next to it as CSV"
        )
        return parser

    @staticmethod
    def execute(parsed: argparse.Namespace, **kwargs) -> bool:
        # combine arguments
        parsed = combine_args(parsed, kwargs)
        # ---
        config = load_config(parsed.config)
        checkpoint, encoder = open_checkpoint(parsed.checkpoint, config)
        tasks = [
            (spec, select_split(spec, posts, parsed.split, config.seed, config.split_ratio))
            for spec, posts in load_task_corpora(config.tasks)
        ]
        hsklogger.info(f"Projecting {sum(len(p) for _, p in tasks)} posts...")
        points = build_map(checkpoint.params, encoder, tasks, parsed.perplexity,
                           parsed.iterations, config.seed)
        render_map(points, parsed.output)
        coords = os.path.splitext(parsed.output)[0] + ".csv"
        write_coordinates(points, coords)
        hsklogger.info(f"Map written to '{parsed.output}', coordinates to '{coords}'.")
        # ---
        return True
