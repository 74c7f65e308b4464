import os
import json
from functools import lru_cache

import hsk

_SCHEMAS_DIR = os.path.join(os.path.dirname(hsk.__file__), 'schemas')


@lru_cache
def _get_schema(schema_fpath: str) -> dict:
    if not os.path.isfile(schema_fpath):
        raise FileNotFoundError(schema_fpath)
    with open(schema_fpath, 'r') as fin:
        return json.load(fin)


def get_config_schema(version: str) -> dict:
    schema_fpath = os.path.join(_SCHEMAS_DIR, "config", f"{version}.json")
    return _get_schema(schema_fpath)
