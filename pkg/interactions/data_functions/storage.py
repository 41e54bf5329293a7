"""Canonical files of a prepared data directory.

dataset.txt, train.txt, test.txt
    ``users=<n> items=<m> pairs=<p>`` then one ``user_id<TAB>item_id``
    line per pair, sorted.
popularity.txt
    ``item_id<TAB>count<TAB>i_pop<TAB>is_popular`` for every item.
users.txt, items.txt
    ``id<TAB>key`` for every id.
split.txt
    ``seed=<n>`` and ``test_fraction=<f>``.
"""

import logging
import os
import re

import numpy as np
import pandas

from interactions.constants import DATASET_FILENAME, ITEMS_FILENAME, \
    POPULARITY_FILENAME, SPLIT_FILENAME, TEST_FILENAME, TRAIN_FILENAME, \
    USERS_FILENAME
from interactions.data_functions.popularity import popularity_from_counts
from interactions.datasets import InteractionDataset, SplitDataset
from recsys_workspace.utils.exceptions import DataFormatError, \
    MissingInputError

logger = logging.getLogger(__name__)

HEADER_RE = re.compile(r'^users=(\d+) items=(\d+) pairs=(\d+)$')
POPULARITY_HEADER = 'item_id\tcount\ti_pop\tis_popular'


def _require_file(path):
    if not os.path.isfile(path):
        raise MissingInputError(f"{path} not found")


def _read_table(handle, path, names, dtype):
    try:
        return pandas.read_csv(handle, sep='\t', header=None, names=names,
                               dtype=dtype, keep_default_na=False)
    except pandas.errors.EmptyDataError:
        return pandas.DataFrame({name: pandas.Series([], dtype=dtype)
                                 for name in names})
    except (ValueError, pandas.errors.ParserError) as e:
        raise DataFormatError(f"{path}: {e}")


def write_dataset(data, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(f"users={data.num_users} items={data.num_items} "
                f"pairs={len(data)}\n")
        for user, item in zip(data.users.tolist(), data.items.tolist()):
            f.write(f"{user}\t{item}\n")
    logger.debug(f"Wrote {data} to {path}")


def read_dataset(path, user_index=None, item_index=None):
    _require_file(path)
    with open(path, encoding='utf-8') as f:
        header = f.readline().strip()
        match = HEADER_RE.match(header)
        if not match:
            raise DataFormatError(f"{path}: bad header {header!r}", line=1)
        num_users, num_items, num_pairs = map(int, match.groups())
        frame = _read_table(f, path, ['user', 'item'], np.int64)
    if len(frame) != num_pairs:
        raise DataFormatError(f"{path}: header says {num_pairs} pairs, "
                              f"found {len(frame)}")
    try:
        data = InteractionDataset(frame['user'].to_numpy(),
                                  frame['item'].to_numpy(),
                                  num_users, num_items,
                                  user_index, item_index)
    except IndexError as e:
        raise DataFormatError(f"{path}: {e}")
    if len(data) != num_pairs:
        raise DataFormatError(f"{path}: duplicate pairs")
    return data


def write_popularity(stats, path):
    frame = pandas.DataFrame({
        'item_id': np.arange(stats.num_items),
        'count': stats.counts,
        'i_pop': stats.i_pop,
        'is_popular': stats.is_popular.astype(np.int64),
    })
    with open(path, 'w', encoding='utf-8') as f:
        f.write(POPULARITY_HEADER + '\n')
        frame.to_csv(f, sep='\t', header=False, index=False,
                     float_format='%.17g')


def read_popularity(path):
    """The threshold and flags are recomputed from the counts, so the
    sidecar cannot disagree with itself."""
    _require_file(path)
    with open(path, encoding='utf-8') as f:
        header = f.readline().rstrip('\n')
        if header != POPULARITY_HEADER:
            raise DataFormatError(f"{path}: bad header {header!r}", line=1)
        frame = _read_table(f, path,
                            ['item_id', 'count', 'i_pop', 'is_popular'],
                            None)
    if not np.array_equal(frame['item_id'].to_numpy(),
                          np.arange(len(frame))):
        raise DataFormatError(f"{path}: item ids must be 0..n-1 in order")
    return popularity_from_counts(frame['count'].to_numpy())


def write_index(index, path):
    with open(path, 'w', encoding='utf-8') as f:
        for key, i in sorted(index.items(), key=lambda kv: kv[1]):
            f.write(f"{i}\t{key}\n")


def read_index(path):
    _require_file(path)
    index = {}
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            i, sep, key = line.rstrip('\n').partition('\t')
            if not sep or not i.isdigit():
                raise DataFormatError(f"{path}: expected id<TAB>key",
                                      line=number)
            index[key] = int(i)
    return index


def write_split(split_data, test_fraction, data_dir):
    write_dataset(split_data.train, os.path.join(data_dir, TRAIN_FILENAME))
    write_dataset(split_data.test, os.path.join(data_dir, TEST_FILENAME))
    with open(os.path.join(data_dir, SPLIT_FILENAME), 'w',
              encoding='utf-8') as f:
        f.write(f"seed={split_data.seed}\n")
        f.write(f"test_fraction={test_fraction!r}\n")


def read_split(data_dir):
    user_index, item_index = read_indexes(data_dir)
    path = os.path.join(data_dir, SPLIT_FILENAME)
    _require_file(path)
    values = {}
    with open(path, encoding='utf-8') as f:
        for line in f:
            key, _, value = line.strip().partition('=')
            values[key] = value
    try:
        seed = int(values['seed'])
    except (KeyError, ValueError):
        raise DataFormatError(f"{path}: missing or bad seed")
    train = read_dataset(os.path.join(data_dir, TRAIN_FILENAME),
                         user_index, item_index)
    test = read_dataset(os.path.join(data_dir, TEST_FILENAME),
                        user_index, item_index)
    if (train.num_users, train.num_items) != \
            (test.num_users, test.num_items):
        raise DataFormatError(f"{data_dir}: train and test id spaces differ")
    return SplitDataset(train, test, seed)


def read_indexes(data_dir):
    paths = [os.path.join(data_dir, name)
             for name in (USERS_FILENAME, ITEMS_FILENAME)]
    if not all(os.path.isfile(path) for path in paths):
        return None, None
    return read_index(paths[0]), read_index(paths[1])


def write_prepared(data_dir, data, split_data, stats, test_fraction):
    """Write every file of a prepared data directory."""
    os.makedirs(data_dir, exist_ok=True)
    write_dataset(data, os.path.join(data_dir, DATASET_FILENAME))
    write_split(split_data, test_fraction, data_dir)
    write_popularity(stats, os.path.join(data_dir, POPULARITY_FILENAME))
    write_index(data.user_index, os.path.join(data_dir, USERS_FILENAME))
    write_index(data.item_index, os.path.join(data_dir, ITEMS_FILENAME))
    logger.info(f"Wrote prepared data to {data_dir}")


def read_prepared(data_dir):
    """Read the split and popularity of a prepared data directory."""
    if not os.path.isdir(data_dir):
        raise MissingInputError(f"Data directory {data_dir} not found")
    split_data = read_split(data_dir)
    stats = read_popularity(os.path.join(data_dir, POPULARITY_FILENAME))
    if stats.num_items != split_data.train.num_items:
        raise DataFormatError(
            f"{data_dir}: popularity covers {stats.num_items} items, "
            f"dataset has {split_data.train.num_items}")
    return split_data, stats
