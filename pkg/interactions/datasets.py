import logging

import numpy as np
import pandas
from scipy import sparse

logger = logging.getLogger(__name__)

RAW_COLUMNS = ['user', 'item', 'value', 'timestamp']


class RawInteractions(object):
    """Interaction records as read from a log file, before binarization.
    Keys are opaque strings; duplicates are allowed.
    """

    def __init__(self, frame=None):
        if frame is None:
            frame = pandas.DataFrame({
                'user': pandas.Series([], dtype=object),
                'item': pandas.Series([], dtype=object),
                'value': pandas.Series([], dtype=float),
                'timestamp': pandas.Series([], dtype='Int64')})
        self.frame = frame.reset_index(drop=True)

    @classmethod
    def from_records(cls, records):
        rows = []
        for record in records:
            user, item = record[0], record[1]
            value = record[2] if len(record) > 2 else None
            timestamp = record[3] if len(record) > 3 else None
            rows.append((str(user), str(item),
                         1.0 if value is None else float(value), timestamp))
        if not rows:
            return cls()
        frame = pandas.DataFrame(rows, columns=RAW_COLUMNS)
        frame['timestamp'] = frame['timestamp'].astype('Int64')
        return cls(frame)

    def __len__(self):
        return len(self.frame)

    @property
    def records(self):
        return [(r.user, r.item, r.value,
                 None if pandas.isna(r.timestamp) else int(r.timestamp))
                for r in self.frame.itertuples(index=False)]

    def __repr__(self):
        return f"RawInteractions ({len(self)} records)"


class InteractionDataset(object):
    """A set of binary (user, item) interactions over contiguous ids.

    Pairs are held as two parallel int64 arrays, sorted by (user, item)
    and free of duplicates.  Train and test views of one dataset share
    ``num_users``, ``num_items`` and the key indexes.
    """

    def __init__(self, users, items, num_users, num_items,
                 user_index=None, item_index=None):
        users = np.asarray(users, dtype=np.int64).reshape(-1)
        items = np.asarray(items, dtype=np.int64).reshape(-1)
        if users.shape != items.shape:
            raise ValueError("users and items must have the same length")
        if len(users):
            if users.min() < 0 or users.max() >= num_users:
                raise IndexError(f"user id out of range [0, {num_users})")
            if items.min() < 0 or items.max() >= num_items:
                raise IndexError(f"item id out of range [0, {num_items})")
        codes = np.unique(users * max(num_items, 1) + items)
        self.num_users = int(num_users)
        self.num_items = int(num_items)
        self.users = codes // max(num_items, 1)
        self.items = codes % max(num_items, 1)
        self._codes = codes
        self.user_index = user_index if user_index is not None else {}
        self.item_index = item_index if item_index is not None else {}

    @classmethod
    def empty(cls, num_users=0, num_items=0, user_index=None,
              item_index=None):
        return cls([], [], num_users, num_items, user_index, item_index)

    def view(self, users, items):
        """Another set of pairs in this dataset's id space."""
        return InteractionDataset(users, items, self.num_users,
                                  self.num_items, self.user_index,
                                  self.item_index)

    def subset(self, mask):
        return self.view(self.users[mask], self.items[mask])

    def __len__(self):
        return len(self._codes)

    def is_empty(self):
        return len(self._codes) == 0

    @property
    def pairs(self):
        return set(zip(self.users.tolist(), self.items.tolist()))

    @property
    def codes(self):
        return self._codes

    def contains(self, users, items):
        """Vectorized membership test for (user, item) pairs."""
        users, items = np.broadcast_arrays(
            np.asarray(users, dtype=np.int64),
            np.asarray(items, dtype=np.int64))
        if not len(self._codes):
            return np.zeros(users.shape, dtype=bool)
        wanted = users * max(self.num_items, 1) + items
        pos = np.searchsorted(self._codes, wanted)
        pos = np.minimum(pos, len(self._codes) - 1)
        return self._codes[pos] == wanted

    def user_degrees(self):
        return np.bincount(self.users, minlength=self.num_users)

    def item_degrees(self):
        return np.bincount(self.items, minlength=self.num_items)

    def active_users(self):
        return np.unique(self.users)

    def interaction_matrix(self):
        """The num_users x num_items 0/1 matrix, CSR."""
        return sparse.csr_matrix(
            (np.ones(len(self), dtype=np.float64), (self.users, self.items)),
            shape=(self.num_users, self.num_items))

    def items_of_user(self, user):
        start, end = np.searchsorted(self.users, [user, user + 1])
        return self.items[start:end]

    def grouped_items(self):
        """Map user id -> sorted item array, for users with pairs."""
        bounds = np.searchsorted(self.users,
                                 np.arange(self.num_users + 1))
        return {u: self.items[bounds[u]:bounds[u + 1]]
                for u in np.unique(self.users).tolist()}

    def sparsity(self):
        cells = self.num_users * self.num_items
        return len(self) / cells if cells else 0.0

    def __eq__(self, other):
        return (isinstance(other, InteractionDataset)
                and self.num_users == other.num_users
                and self.num_items == other.num_items
                and np.array_equal(self._codes, other._codes))

    def __repr__(self):
        return (f"InteractionDataset users={self.num_users} "
                f"items={self.num_items} pairs={len(self)}")


class SplitDataset(object):
    def __init__(self, train, test, seed):
        self.train = train
        self.test = test
        self.seed = seed

    def __repr__(self):
        return (f"SplitDataset train={len(self.train)} "
                f"test={len(self.test)} seed={self.seed}")


class PopularityStats(object):
    """Per-item popularity measured on the training pairs."""

    def __init__(self, counts, i_pop, popular_threshold, is_popular):
        self.counts = np.asarray(counts, dtype=np.int64)
        self.i_pop = np.asarray(i_pop, dtype=np.float64)
        self.popular_threshold = float(popular_threshold)
        self.is_popular = np.asarray(is_popular, dtype=bool)

    @property
    def num_items(self):
        return len(self.counts)

    def quantile_groups(self, n_groups=5):
        """Assign every item to one of ``n_groups`` equal-size groups by
        rank of train count (ties broken by item id).  Group 0 holds the
        least popular items.
        """
        n = len(self.counts)
        order = np.lexsort((np.arange(n), self.counts))
        groups = np.empty(n, dtype=np.int64)
        groups[order] = (np.arange(n) * n_groups) // max(n, 1)
        return groups

    def __repr__(self):
        return (f"PopularityStats items={self.num_items} "
                f"threshold={self.popular_threshold:g} "
                f"popular={int(self.is_popular.sum())}")
