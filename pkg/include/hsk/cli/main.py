import argparse
import sys

import hsk
from hsk.cli import configure_verbosity
from hsk.cli.commands.eval import CLIEvalCommand
from hsk.cli.commands.experiment import CLIExperimentCommand
from hsk.cli.commands.grid import CLIGridCommand
from hsk.cli.commands.highlight import CLIHighlightCommand
from hsk.cli.commands.map import CLIMapCommand
from hsk.cli.commands.preprocess import CLIPreprocessCommand
from hsk.cli.commands.train import CLITrainCommand
from hsk.cli.logger import hsklogger
from hsk.exceptions import HSKException

_supported_commands = {
    'preprocess': CLIPreprocessCommand,
    'train': CLITrainCommand,
    'grid': CLIGridCommand,
    'eval': CLIEvalCommand,
    'highlight': CLIHighlightCommand,
    'map': CLIMapCommand,
    'experiment': CLIExperimentCommand,
}


def run(args=None):
    args = list(sys.argv[1:] if args is None else args)
    parser = argparse.ArgumentParser(prog='hsk', add_help=False)
    parser.add_argument(
        'command',
        choices=_supported_commands.keys()
    )
    # print help (if needed)
    if not args or args[0] in ['-h', '--help']:
        parser.print_help()
        return
    # parse `command`
    parsed, remaining = parser.parse_known_args(args[:1])
    # get command
    command = _supported_commands[parsed.command]
    # let the command parse its arguments
    cmd_parser = command.get_parser(args[1:])
    parsed = cmd_parser.parse_args(args[1:])
    configure_verbosity(parsed)
    hsklogger.debug(f"HSK - Hate-Speech toolKit - v{hsk.__version__}")
    # execute command
    try:
        res = command.execute(parsed)
        if res is False:
            sys.exit(1)
    except HSKException as e:
        hsklogger.error(str(e))
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        hsklogger.info(f"Operation aborted by the user")
        sys.exit(130)


if __name__ == '__main__':
    run()
