import copy
import os
import re
from collections import OrderedDict
from enum import Enum
from typing import Dict, Optional, Any

import dacite
import jsonschema
import yaml
from jsonschema.validators import Draft7Validator
from mergedeep import merge

from .cli.logger import hsklogger
from .constants import DEFAULT_CONFIG, CONFIG_SCHEMA_VERSION
from .exceptions import HSKConfigException, HSKDataException
from .schemas import get_config_schema
from .types import TrainConfig, TrainMode

_TASK_KEY = re.compile(r"^task\.(?P<name>[A-Za-z0-9_-]+)\.(?P<field>path|labels|fraction)$")


class _ConfigLoader(yaml.SafeLoader):
    pass


# YAML 1.1 needs a dot in a float, `1e-3` would otherwise load as a string
_ConfigLoader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:[0-9][0-9_]*)(?:\.[0-9_]*)?[eE][-+]?[0-9]+$"),
    list("-+0123456789"),
)


def validate_config(config: TrainConfig, path: Optional[str] = None):
    """
    Checks the constraints that span several keys.
    """
    if not config.tasks:
        raise HSKConfigException(path, "At least one task must be declared.")
    for key in ["hidden_size", "batch_size", "epochs", "eval_every", "layers"]:
        if getattr(config, key) < 1:
            raise HSKConfigException(path, f"`{key}` must be positive.")
    if config.lr <= 0 or config.weight_decay < 0:
        raise HSKConfigException(path, "`lr` must be positive and `weight_decay` non-negative.")
    if config.epochs % config.eval_every != 0:
        raise HSKConfigException(path, f"`eval_every` ({config.eval_every}) must divide "
                                       f"`epochs` ({config.epochs}).")
    if config.mode is TrainMode.SINGLE and len(config.tasks) > 1:
        raise HSKConfigException(path, f"Single-task mode trains exactly one task, "
                                       f"{len(config.tasks)} were given. Use `mode: transfer`.")


def _resolve(base: str, fpath: Optional[str]) -> Optional[str]:
    if fpath is None:
        return None
    fpath = os.path.expanduser(fpath)
    return fpath if os.path.isabs(fpath) else os.path.normpath(os.path.join(base, fpath))


def _labels(value: Any):
    if isinstance(value, str):
        return [label.strip() for label in value.split(",") if label.strip()]
    return list(value)


def parse_config(raw: Dict[str, Any], path: Optional[str] = None,
                 base: Optional[str] = None) -> TrainConfig:
    """
    Builds a training configuration out of the flat key/value form, defaults applied.
    """
    if not isinstance(raw, dict):
        raise HSKConfigException(path, "The configuration must be a mapping of keys to values.")
    version = str(raw.get("schema", CONFIG_SCHEMA_VERSION))
    try:
        validator = Draft7Validator(get_config_schema(version))
    except FileNotFoundError:
        raise HSKConfigException(path, f"Configuration schema version {version} is not supported.")
    try:
        validator.validate(raw)
    except jsonschema.exceptions.ValidationError as e:
        where = ".".join(map(str, e.absolute_path))
        raise HSKConfigException(path, f"{e.message}" + (f" (key `{where}`)" if where else ""))
    flat: Dict[str, Any] = merge({}, copy.deepcopy(DEFAULT_CONFIG), raw)
    flat.pop("schema", None)
    base = base if base is not None else os.getcwd()
    # group the `task.<name>.<field>` keys, tasks keep their order of appearance
    tasks: Dict[str, Dict[str, Any]] = OrderedDict()
    for key in list(flat.keys()):
        match = _TASK_KEY.match(key)
        if match:
            tasks.setdefault(match.group("name"), {})[match.group("field")] = flat.pop(key)
    for name, fields in tasks.items():
        for field in ["path", "labels"]:
            if field not in fields:
                raise HSKConfigException(path, f"Task '{name}' has no `task.{name}.{field}`.")
    data = {
        **{k: v for k, v in flat.items() if not k.startswith("embeddings.")},
        "embeddings": {
            "path": _resolve(base, flat.get("embeddings.path")),
            "dim": flat["embeddings.dim"],
            "ngram_len": flat["embeddings.ngram_len"],
            "seed": flat["embeddings.seed"],
        },
        "tasks": [
            {
                "name": name,
                "labels": _labels(fields["labels"]),
                "path": _resolve(base, fields["path"]),
                "fraction": fields.get("fraction", 1.0),
            } for name, fields in tasks.items()
        ],
    }
    try:
        config = dacite.from_dict(TrainConfig, data, config=dacite.Config(cast=[Enum, float]))
    except (dacite.DaciteError, ValueError) as e:
        raise HSKConfigException(path, e)
    except HSKDataException as e:
        raise HSKConfigException(path, e)
    validate_config(config, path)
    return config


def load_config(fpath: str) -> TrainConfig:
    fpath = os.path.abspath(fpath)
    try:
        with open(fpath, "rt") as fin:
            raw = yaml.load(fin, Loader=_ConfigLoader)
    except OSError as e:
        raise HSKConfigException(fpath, e)
    except yaml.YAMLError as e:
        raise HSKConfigException(fpath, f"Not a valid YAML document. {e}")
    config = parse_config(raw if raw is not None else {}, fpath, os.path.dirname(fpath))
    hsklogger.debug(f"Loaded configuration `{fpath}` with tasks [{', '.join(config.task_names)}]")
    return config


def dump_config(config: TrainConfig, fpath: str):
    with open(fpath, "wt") as fout:
        yaml.safe_dump({"schema": CONFIG_SCHEMA_VERSION, **config.as_flat_dict()}, fout,
                       sort_keys=False, default_flow_style=False)
