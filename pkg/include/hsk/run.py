import os
from typing import Dict, Optional, List

import hsk
from .cli.logger import hsklogger
from .config import dump_config
from .constants import CHECKPOINT_FILENAME, RUN_CONFIG_FILENAME, RUN_MANIFEST_FILENAME, \
    RUN_HISTORY_FILENAME
from .exceptions import HSKDataException
from .neural.checkpoint import Checkpoint
from .types import TrainConfig, TrainHistory, RunManifest
from .utils.misc import file_digest


class HSKRun:
    """
    Output directory of a training run.

    The manifest lists the digests of every input file before training starts. Artifacts
    are added to it, with their own digests, as they are written. Nothing in the directory
    depends on the wall clock, two runs with the same inputs produce identical files.
    """

    def __init__(self, path: str, config: TrainConfig):
        self._path = os.path.abspath(path)
        if os.path.exists(self._path) and not os.path.isdir(self._path):
            raise HSKDataException(f"The run directory `{self._path}` exists and is not a "
                                   f"directory.")
        try:
            os.makedirs(self._path, exist_ok=True)
        except OSError as e:
            raise HSKDataException(f"Cannot create the run directory `{self._path}`. "
                                   f"{e.strerror or e}.")
        self._config = config
        self._manifest = RunManifest(
            config=config.as_flat_dict(),
            digests=self._input_digests(config),
            seed=config.seed,
            version=hsk.__version__,
        )

    @property
    def path(self) -> str:
        return self._path

    @property
    def manifest(self) -> RunManifest:
        return self._manifest

    def resource(self, name: str) -> str:
        return os.path.join(self._path, name)

    @staticmethod
    def _input_digests(config: TrainConfig) -> Dict[str, str]:
        inputs: List[Optional[str]] = [task.path for task in config.tasks]
        inputs.append(config.embeddings.path)
        digests: Dict[str, str] = {}
        for fpath in filter(None, inputs):
            if not os.path.isfile(fpath):
                raise HSKDataException(f"Input file `{fpath}` does not exist.")
            digests[fpath] = file_digest(fpath)
        return digests

    def _artifact(self, key: str, name: str):
        self._manifest.artifacts[key] = f"{name} {file_digest(self.resource(name))}"
        self._manifest.write(self.resource(RUN_MANIFEST_FILENAME))

    def begin(self):
        dump_config(self._config, self.resource(RUN_CONFIG_FILENAME))
        self._manifest.write(self.resource(RUN_MANIFEST_FILENAME))
        hsklogger.info(f"Run directory: {self._path}")

    def save_checkpoint(self, checkpoint: Checkpoint):
        checkpoint.save(self.resource(CHECKPOINT_FILENAME))
        self._artifact("checkpoint", CHECKPOINT_FILENAME)

    def save_history(self, history: TrainHistory):
        history.write_csv(self.resource(RUN_HISTORY_FILENAME))
        self._artifact("history", RUN_HISTORY_FILENAME)
