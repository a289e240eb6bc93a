"""
s2shock: utils/json_utils.py

Provides custom json encoder for data models, result models and numpy
values, and JSON-lines helpers for run records.

License: MIT
"""

import functools
import json
import math

import numpy as np

from ..data_models import DataModel, _to_plain
from ..exceptions import PersistenceError
from ..result_models import Result

__all__ = ['DataModelEncoder', 'json_dumps', 'finite_or_none', 'write_jsonl', 'read_jsonl']


def finite_or_none(v):
    """Replace non-finite floats by None, recursively."""
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: finite_or_none(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [finite_or_none(x) for x in v]
    return v


class DataModelEncoder(json.JSONEncoder):

    def default(self, o):
        if isinstance(o, (DataModel, Result)):
            return finite_or_none(_to_plain(o.to_dict()))
        if isinstance(o, (np.ndarray, np.generic)):
            return finite_or_none(_to_plain(o))
        return json.JSONEncoder.default(self, o)


_dumps = functools.partial(json.dumps, cls=DataModelEncoder, allow_nan=False)


def json_dumps(obj, **kwargs):
    return _dumps(finite_or_none(_to_plain(obj)), **kwargs)


def write_jsonl(path, records):
    """Write one JSON object per line."""
    try:
        with open(str(path), 'w', encoding='utf-8') as fh:
            for record in records:
                fh.write(json_dumps(record, sort_keys=True))
                fh.write('\n')
    except (IOError, OSError) as e:
        raise PersistenceError(details='{}: {}'.format(path, e))


def read_jsonl(path):
    """Read a JSON-lines file into a list of dicts."""
    try:
        with open(str(path), 'r', encoding='utf-8') as fh:
            return [json.loads(line) for line in fh if line.strip()]
    except (IOError, OSError) as e:
        raise PersistenceError(details='{}: {}'.format(path, e))
    except ValueError as e:
        raise PersistenceError('Malformed JSON-lines file', details='{}: {}'.format(path, e))
