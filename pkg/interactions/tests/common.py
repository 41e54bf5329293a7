import os
import tempfile

import numpy as np

from interactions.data_functions.popularity import compute_popularity
from interactions.data_functions.storage import write_prepared
from interactions.datasets import InteractionDataset, SplitDataset


def make_dataset(pairs, num_users=None, num_items=None):
    """An InteractionDataset from (user_id, item_id) tuples."""
    users = [u for u, _ in pairs]
    items = [i for _, i in pairs]
    if num_users is None:
        num_users = max(users) + 1 if users else 0
    if num_items is None:
        num_items = max(items) + 1 if items else 0
    return InteractionDataset(users, items, num_users, num_items)


def full_dataset(num_users, num_items):
    return make_dataset([(u, i) for u in range(num_users)
                         for i in range(num_items)])


class TempDirMixin(object):
    def setUp(self, *args, **kwargs):
        super().setUp(*args, **kwargs)
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmpdir = tmp.name

    def write_file(self, name, lines):
        path = os.path.join(self.tmpdir, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(''.join(f"{line}\n" for line in lines))
        return path


def fixture_split():
    """20 users and 30 items where items 0-2 are popular and the test
    split has a popular proportion of 0.6."""
    train_pairs = [(u, i) for u in range(15) for i in range(3)]
    train_pairs += [(u, 3 + u) for u in range(20)]
    test_pairs = [(u, i) for u in range(15, 20) for i in range(3)]
    test_pairs += [(u, 23 + u % 7) for u in range(10)]
    train = make_dataset(train_pairs, 20, 30)
    test = make_dataset(test_pairs, 20, 30)
    return SplitDataset(train, test, seed=0)


def write_fixture_data(data_dir):
    split_data = fixture_split()
    everything = split_data.train.view(
        np.concatenate([split_data.train.users, split_data.test.users]),
        np.concatenate([split_data.train.items, split_data.test.items]))
    write_prepared(data_dir, everything, split_data,
                   compute_popularity(split_data.train), 0.2)
    return split_data


FIXTURES_DIR = os.path.join(os.path.dirname(__file__), 'fixtures')
