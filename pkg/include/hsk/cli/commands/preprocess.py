import argparse
import os
from typing import Optional

from .. import AbstractCLICommand
from ..logger import hsklogger
from ..utils import combine_args
from ...preprocess import preprocess_file
from ...types import Arguments


class CLIPreprocessCommand(AbstractCLICommand):

    KEY = 'preprocess'

    @staticmethod
    def parser(parent: Optional[argparse.ArgumentParser] = None,
               args: Optional[Arguments] = None) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(parents=[parent])
        parser.add_argument(
            "input",
            help="Raw corpus, a CSV file with columns `id,text,label`"
        )
        parser.add_argument(
            "output",
            help="Destination of the cleaned corpus (`id,tokens,label`)"
        )
        return parser

    @staticmethod
    def execute(parsed: argparse.Namespace, **kwargs) -> bool:
        # combine arguments
        parsed = combine_args(parsed, kwargs)
        # ---
        in_fpath = os.path.abspath(parsed.input)
        out_fpath = os.path.abspath(parsed.output)
        if in_fpath == out_fpath:
            hsklogger.error("Input and output must be different files.")
            return False
        count = preprocess_file(in_fpath, out_fpath)
        hsklogger.info(f"Cleaned {count} posts into '{out_fpath}'.")
        return True
