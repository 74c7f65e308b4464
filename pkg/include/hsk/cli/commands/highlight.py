import argparse
from typing import Optional

from .. import AbstractCLICommand
from ..logger import hsklogger
from ..utils import combine_args
from ...config import load_config
from ...interpret import highlight, render_highlight
from ...preprocess import load_corpus, clean_text, tokenize
from ...training import open_checkpoint
from ...types import Arguments


class CLIHighlightCommand(AbstractCLICommand):

    KEY = 'highlight'

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
            "-t",
            "--task",
            default=None,
            help="Task whose classifier is used (default: the first task)"
        )
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument(
            "--id",
            default=None,
            help="Id of a post in the task's corpus"
        )
        source.add_argument(
            "--text",
            default=None,
            help="Raw text of a post"
        )
        parser.add_argument(
            "-o",
            "--output",
            default="highlight.html",
            help="Destination HTML file"
        )
        return parser

    @staticmethod
    def execute(parsed: argparse.Namespace, **kwargs) -> bool:
        # combine arguments
        parsed = combine_args(parsed, kwargs)
        # ---
        config = load_config(parsed.config)
        checkpoint, encoder = open_checkpoint(parsed.checkpoint, config)
        task = checkpoint.task(parsed.task or checkpoint.task_names[0])
        gold = None
        if parsed.id is not None:
            matches = [p for p in load_corpus(config.task(task.name).path, task)
                       if p.id == parsed.id]
            if not matches:
                hsklogger.error(f"No post with id '{parsed.id}' in the corpus of task "
                                f"'{task.name}'.")
                return False
            tokens, gold = matches[0].tokens, matches[0].label_id
        else:
            tokens = tokenize(clean_text(parsed.text))
        report = highlight(checkpoint.params, encoder, task, tokens, gold)
        render_highlight(report, parsed.output)
        hsklogger.info(f"Predicted '{report.predicted}', highlight written to '{parsed.output}'.")
        # ---
        return True
