import argparse
from typing import Optional

from .. import AbstractCLICommand
from ..logger import hsklogger
from ..utils import combine_args, as_table
from ...baseline import BaselineLearner
from ...config import load_config
from ...constants import DEFAULT_REPETITIONS
from ...embeddings import Encoder
from ...evaluation import repeated_experiment, write_reports
from ...preprocess import load_task_corpora
from ...training import DeepHateLearner
from ...types import Arguments


class CLIExperimentCommand(AbstractCLICommand):

    KEY = 'experiment'

    @staticmethod
    def parser(parent: Optional[argparse.ArgumentParser] = None,
               args: Optional[Arguments] = None) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(parents=[parent])
        parser.add_argument(
            "config",
            help="Configuration describing the model and the tasks"
        )
        parser.add_argument(
            "-n",
            "--repetitions",
            type=int,
            default=DEFAULT_REPETITIONS,
            help="Number of seeded split/train/test runs"
        )
        parser.add_argument(
            "--learner",
            default="deephate",
            choices=["deephate", "baseline"],
            help="Model to evaluate, the neural model or the character n-gram baseline"
        )
        parser.add_argument(
            "-o",
            "--output",
            default="experiment",
            help="Directory where to write the reports"
        )
        return parser

    @staticmethod
    def execute(parsed: argparse.Namespace, **kwargs) -> bool:
        # combine arguments
        parsed = combine_args(parsed, kwargs)
        # ---
        if parsed.repetitions < 1:
            hsklogger.error("At least one repetition is needed.")
            return False
        config = load_config(parsed.config)
        if parsed.learner == "baseline":
            learner = BaselineLearner()
        else:
            learner = DeepHateLearner(config, Encoder.from_config(config.embeddings,
                                                                  config.precision.dtype))
        corpora = load_task_corpora(config.tasks)
        reports = repeated_experiment(learner, corpora, parsed.repetitions, config.split_ratio)
        write_reports(reports, parsed.output)
        info: dict = {
            task: f"{report.mean:.4f} ± {report.std:.4f}" for task, report in reports.items()
        }
        print(as_table(info, f"Macro-F1 over {parsed.repetitions} runs ({parsed.learner})"))
        # ---
        return True
