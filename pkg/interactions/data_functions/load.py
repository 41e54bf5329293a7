import logging
import os

import numpy as np
import pandas

from interactions.constants import CSV, FORMAT_DELIMITERS
from interactions.datasets import RAW_COLUMNS, InteractionDataset, \
    RawInteractions
from recsys_workspace.utils.exceptions import ConfigError, \
    DataFormatError, MissingInputError

logger = logging.getLogger(__name__)


def _is_number(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def load_interactions(path, format=CSV):
    """Read a CSV/TSV interaction log with columns
    ``user,item[,value[,timestamp]]``.

    A first line whose third field is not numeric is taken to be a
    header and skipped.  Blank lines are ignored.  A missing value
    means a unit interaction.
    """
    if format not in FORMAT_DELIMITERS:
        raise ConfigError(f"Unknown input format '{format}'")
    if not os.path.isfile(path):
        raise MissingInputError(f"Interaction file {path} not found")
    try:
        frame = pandas.read_csv(
            path, sep=FORMAT_DELIMITERS[format], header=None,
            names=RAW_COLUMNS, dtype=str, index_col=False,
            keep_default_na=False, skip_blank_lines=False,
            encoding='utf-8')
    except pandas.errors.EmptyDataError:
        logger.warning(f"{path} is empty")
        return RawInteractions()
    except pandas.errors.ParserError as e:
        raise DataFormatError(f"{path}: {e}")
    except UnicodeDecodeError as e:
        raise DataFormatError(f"{path} is not UTF-8: {e}")
    except OSError as e:
        raise MissingInputError(f"Cannot read {path}: {e}")

    frame = frame.fillna('')
    for column in RAW_COLUMNS:
        frame[column] = frame[column].str.strip()
    # Line numbers are 1-based positions in the file
    frame.index = np.arange(1, len(frame) + 1)

    blank = (frame == '').all(axis=1)
    frame = frame[~blank]
    if len(frame) and frame['value'].iloc[0] != '' \
            and not _is_number(frame['value'].iloc[0]):
        logger.debug(f"Skipping header line {frame.index[0]} of {path}")
        frame = frame.iloc[1:]

    short = (frame['user'] == '') | (frame['item'] == '')
    if short.any():
        raise DataFormatError(f"{path}: expected at least 2 fields",
                              line=int(frame.index[short.argmax()]))

    values = pandas.to_numeric(frame['value'].replace('', '1'),
                               errors='coerce')
    bad = values.isna()
    if bad.any():
        raise DataFormatError(f"{path}: value is not a number",
                              line=int(frame.index[bad.argmax()]))

    timestamps = pandas.to_numeric(frame['timestamp'], errors='coerce')
    bad = (frame['timestamp'] != '') & (
        timestamps.isna() | (timestamps % 1 != 0))
    if bad.any():
        raise DataFormatError(f"{path}: timestamp is not integer seconds",
                              line=int(frame.index[bad.argmax()]))

    raw = RawInteractions(pandas.DataFrame({
        'user': frame['user'],
        'item': frame['item'],
        'value': values.astype(np.float64),
        'timestamp': timestamps.astype('Int64'),
    }))
    logger.info(f"Loaded {len(raw)} records from {path}")
    return raw


def binarize(raw):
    """Every record becomes a positive pair; ids follow the lexicographic
    order of the keys."""
    frame = raw.frame
    if not len(frame):
        return InteractionDataset.empty()
    user_codes, user_keys = pandas.factorize(frame['user'], sort=True)
    item_codes, item_keys = pandas.factorize(frame['item'], sort=True)
    data = InteractionDataset(
        user_codes, item_codes, len(user_keys), len(item_keys),
        user_index={key: i for i, key in enumerate(user_keys)},
        item_index={key: i for i, key in enumerate(item_keys)})
    logger.info(f"Binarized {len(raw)} records into {data}")
    return data
