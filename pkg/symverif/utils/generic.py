#!/usr/bin/env python
import json
import logging
import os
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pkg_resources

LOGGER = logging.getLogger(__name__)

SOLVER_ENV = 'SYMVERIF_SOLVER'

DEFAULT_CONFIG_FN = pkg_resources.resource_filename(
    'symverif', 'assets/default_config.json')


def load_json(fn):
    with open(fn) as f:
        return json.load(f)


def load_config(fn=None, **overrides):
    """Load a verifier configuration.

    The package defaults are updated with the contents of `fn` (if
    given), then with the solver named in the ``SYMVERIF_SOLVER``
    environment variable, then with the keyword arguments whose value is
    not None.

    Parameters
    ----------
    fn : str, optional
        Path of a JSON configuration file.
    **overrides
        Individual configuration values, typically from CLI flags.

    Returns
    -------
    dict
        The merged configuration.

    """
    config = load_json(DEFAULT_CONFIG_FN)
    if fn is not None:
        user = load_json(fn)
        unknown = set(user).difference(config)
        if unknown:
            raise KeyError('Unknown configuration keys: {0}'
                           .format(', '.join(sorted(unknown))))
        config.update(user)

    if os.environ.get(SOLVER_ENV):
        config['solver'] = os.environ[SOLVER_ENV]

    for k, v in overrides.items():
        if k not in config:
            raise KeyError('Unknown configuration key `{0}`'.format(k))
        if v is not None:
            config[k] = v
    return config


def get_config(config=None):
    if config is None:
        return load_config()
    full = load_config()
    full.update(config)
    return full


def make_rng(seed):
    return np.random.RandomState(seed)


def to_jsonable(obj):
    """Convert nested report structures to JSON serializable values"""
    if isinstance(obj, dict):
        return dict((str(k), to_jsonable(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple, set)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return obj.numerator
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def dump_json(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


@contextmanager
def timed(record, key='seconds'):
    """Store the wall time of the enclosed block in `record[key]`"""
    start = time.perf_counter()
    try:
        yield record
    finally:
        record[key] = time.perf_counter() - start
