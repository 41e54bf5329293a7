"""Run configuration.

A run's configuration is a flat set of typed keys.  Values are resolved
in this order, later sources winning:

  1. the project settings (``DCCL_<KEY>``, themselves read from the
     environment or ``local_settings.py``),
  2. a ``key=value`` config file given with ``--config``,
  3. command flags.

The resolved configuration is written next to the run outputs in the
same ``key=value`` format, so any run can be repeated from its
``config.txt``.
"""

import hashlib
import logging
import os

from distutils.util import strtobool

from django.conf import settings

from recsys_workspace.utils.exceptions import ConfigError, MissingInputError

logger = logging.getLogger(__name__)

INT = 'int'
FLOAT = 'float'
STR = 'str'
BOOL = 'bool'
PATH = 'path'
FLOAT_LIST = 'float_list'
INT_LIST = 'int_list'

# key -> (type, settings name for the default, allowed values)
CONFIG_KEYS = {
    'seed': (INT, 'DCCL_SEED', None),
    'threads': (INT, 'DCCL_THREADS', None),
    'out': (PATH, 'DCCL_OUTPUT_DIR', None),
    # inputs
    'input': (PATH, None, None),
    'format': (STR, 'DCCL_FORMAT', ('csv', 'tsv')),
    'data': (PATH, None, None),
    'checkpoint': (PATH, None, None),
    # preprocessing
    'k_core': (INT, 'DCCL_K_CORE', None),
    'test_fraction': (FLOAT, 'DCCL_TEST_FRACTION', None),
    # model and training
    'embedding_dim': (INT, 'DCCL_EMBEDDING_DIM', None),
    'init_scale': (FLOAT, 'DCCL_INIT_SCALE', None),
    'batch_size': (INT, 'DCCL_BATCH_SIZE', None),
    'learning_rate': (FLOAT, 'DCCL_LEARNING_RATE', None),
    'alpha': (FLOAT, 'DCCL_ALPHA', None),
    'beta': (FLOAT, 'DCCL_BETA', None),
    'epochs': (INT, 'DCCL_EPOCHS', None),
    'backbone': (STR, 'DCCL_BACKBONE', ('mf', 'lightgcn')),
    'layers': (INT, 'DCCL_LAYERS', None),
    'loss_mode': (STR, 'DCCL_LOSS_MODE', ('weighted', 'literal')),
    'false_negative_filter': (BOOL, 'DCCL_FALSE_NEGATIVE_FILTER', None),
    'validation_fraction': (FLOAT, 'DCCL_VALIDATION_FRACTION', None),
    'patience': (INT, 'DCCL_PATIENCE', None),
    'adam_beta1': (FLOAT, 'DCCL_ADAM_BETA1', None),
    'adam_beta2': (FLOAT, 'DCCL_ADAM_BETA2', None),
    'adam_eps': (FLOAT, 'DCCL_ADAM_EPS', None),
    # evaluation
    'top_k': (INT, 'DCCL_TOP_K', None),
    'proportions': (FLOAT_LIST, 'DCCL_PROPORTIONS', None),
    'ood_seeds': (INT_LIST, 'DCCL_OOD_SEEDS', None),
    # synthetic world
    'synth_users': (INT, 'DCCL_SYNTH_USERS', None),
    'synth_items': (INT, 'DCCL_SYNTH_ITEMS', None),
    'synth_dim': (INT, 'DCCL_SYNTH_DIM', None),
    'synth_density': (FLOAT, 'DCCL_SYNTH_DENSITY', None),
    'synth_pop_exponent': (FLOAT, 'DCCL_SYNTH_POP_EXPONENT', None),
    'synth_interest_scale': (FLOAT, 'DCCL_SYNTH_INTEREST_SCALE', None),
    'synth_conformity_mix': (FLOAT, 'DCCL_SYNTH_CONFORMITY_MIX', None),
    'synth_conformity_share': (FLOAT, 'DCCL_SYNTH_CONFORMITY_SHARE', None),
}

# Keys that say where things are rather than what is computed
UNHASHED_KEYS = frozenset(['out', 'threads', 'input', 'data', 'checkpoint'])


def parse_value(key, raw):
    if key not in CONFIG_KEYS:
        raise ConfigError(f"Unknown configuration key '{key}'")
    kind, _, choices = CONFIG_KEYS[key]
    if isinstance(raw, str):
        raw = raw.strip()
    elif raw is None or kind in (FLOAT_LIST, INT_LIST):
        pass
    else:
        raw = str(raw) if kind != BOOL else raw
    try:
        if raw is None or raw == '':
            value = None
        elif kind == INT:
            value = int(raw)
        elif kind == FLOAT:
            value = float(raw)
        elif kind == BOOL:
            value = raw if isinstance(raw, bool) else bool(strtobool(raw))
        elif kind == FLOAT_LIST:
            items = raw.split(',') if isinstance(raw, str) else raw
            value = [float(v) for v in items if str(v).strip() != '']
        elif kind == INT_LIST:
            items = raw.split(',') if isinstance(raw, str) else raw
            value = [int(v) for v in items if str(v).strip() != '']
        else:
            value = raw
    except ValueError:
        raise ConfigError(f"Bad value for '{key}': {raw!r} is not {kind}")
    if choices and value is not None and value not in choices:
        raise ConfigError(f"Bad value for '{key}': {value!r} "
                          f"not one of {', '.join(choices)}")
    return value


def format_value(key, value):
    kind = CONFIG_KEYS[key][0]
    if value is None:
        return ''
    if kind in (FLOAT_LIST, INT_LIST):
        return ','.join(repr(v) for v in value)
    if kind == FLOAT:
        return repr(float(value))
    if kind == BOOL:
        return 'true' if value else 'false'
    return str(value)


def read_config_file(path):
    """Read a flat ``key=value`` file.  Blank lines and lines starting
    with '#' are ignored.  Each key may appear once.
    """
    if not os.path.isfile(path):
        raise MissingInputError(f"Config file {path} not found")
    values = {}
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            key, sep, raw = line.partition('=')
            key = key.strip()
            if not sep:
                raise ConfigError(f"{path} line {number}: expected key=value")
            if key in values:
                raise ConfigError(
                    f"{path} line {number}: duplicate key '{key}'")
            values[key] = parse_value(key, raw)
    return values


def defaults():
    values = {}
    for key, (_, setting, _) in CONFIG_KEYS.items():
        raw = getattr(settings, setting, None) if setting else None
        values[key] = parse_value(key, raw)
    return values


class RunConfig(object):
    """The resolved configuration of one command invocation."""

    def __init__(self, values):
        unknown = set(values) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(
                f"Unknown configuration keys: {', '.join(sorted(unknown))}")
        self._values = defaults()
        self._values.update(values)

    @classmethod
    def resolve(cls, config_path=None, overrides=None):
        values = {}
        if config_path:
            values.update(read_config_file(config_path))
            logger.debug(f"Read {len(values)} keys from {config_path}")
        for key, raw in (overrides or {}).items():
            if raw is not None:
                values[key] = parse_value(key, raw)
        return cls(values)

    def __getattr__(self, name):
        values = self.__dict__.get('_values')
        if values is None or name not in values:
            raise AttributeError(name)
        return values[name]

    def __getitem__(self, key):
        return self._values[key]

    def as_dict(self):
        return dict(self._values)

    def replace(self, **changes):
        values = self.as_dict()
        for key, value in changes.items():
            values[key] = parse_value(key, value) \
                if isinstance(value, str) else value
        return RunConfig(values)

    def as_text(self, include_unhashed=True):
        lines = [f"{key}={format_value(key, self._values[key])}"
                 for key in sorted(self._values)
                 if include_unhashed or key not in UNHASHED_KEYS]
        return '\n'.join(lines) + '\n'

    def config_hash(self):
        text = self.as_text(include_unhashed=False)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:12]

    def write(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.as_text())

    def __repr__(self):
        return f"RunConfig {self.config_hash()}"
