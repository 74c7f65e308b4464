import argparse
from typing import Optional

from .. import AbstractCLICommand
from ..logger import hsklogger
from ..utils import combine_args, as_table
from ...config import load_config
from ...evaluation import evaluate, write_reports
from ...preprocess import load_task_corpora
from ...sampling import select_split, SPLITS
from ...training import open_checkpoint, predict_posts
from ...types import Arguments


class CLIEvalCommand(AbstractCLICommand):

    KEY = 'eval'

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
            help="Side of the seeded split to evaluate on"
        )
        parser.add_argument(
            "-o",
            "--output",
            default=None,
            help="Directory where to write the reports"
        )
        return parser

    @staticmethod
    def execute(parsed: argparse.Namespace, **kwargs) -> bool:
        # combine arguments
        parsed = combine_args(parsed, kwargs)
        # ---
        config = load_config(parsed.config)
        checkpoint, encoder = open_checkpoint(parsed.checkpoint, config)
        reports = {}
        for spec, posts in load_task_corpora(config.tasks):
            posts = select_split(spec, posts, parsed.split, config.seed, config.split_ratio)
            pred = predict_posts(checkpoint.params, encoder, spec.name, posts)
            reports[spec.name] = evaluate([p.label_id for p in posts], pred, spec)
        info: dict = {task: f"{report.macro_f1:.4f}" for task, report in reports.items()}
        print(as_table(info, f"Macro-F1 ({parsed.split})"))
        for task, report in reports.items():
            for gold, other, share in report.confusion.most_confused():
                hsklogger.info(f"[{task}] '{gold}' is confused with '{other}' in "
                               f"{100 * share:.0f}% of the cases.")
        if parsed.output:
            write_reports(reports, parsed.output)
            hsklogger.info(f"Reports written to '{parsed.output}'.")
        # ---
        return True
