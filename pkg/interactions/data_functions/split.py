import logging

import numpy as np

from interactions.constants import DEFAULT_TEST_FRACTION
from interactions.datasets import SplitDataset

logger = logging.getLogger(__name__)


def holdout_mask(data, fraction, rng):
    """Mark round(fraction * degree) uniformly chosen pairs of each user.
    Halves round up."""
    degrees = data.user_degrees()
    n_marked = np.floor(fraction * degrees + 0.5).astype(np.int64)
    keys = rng.random(len(data))
    # pairs are sorted by user, so each user's block starts at a cumsum
    order = np.lexsort((keys, data.users))
    starts = np.concatenate(([0], np.cumsum(degrees)[:-1]))
    ranks = np.arange(len(data)) - starts[data.users[order]]
    marked = np.empty(len(data), dtype=bool)
    marked[order] = ranks < n_marked[data.users[order]]
    return marked, n_marked


def split(data, test_fraction=DEFAULT_TEST_FRACTION, seed=0):
    """Per-user random holdout.  Users that would keep no training pair
    are dropped from both sides."""
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), "
                         f"got {test_fraction}")
    rng = np.random.default_rng(seed)
    is_test, n_test = holdout_mask(data, test_fraction, rng)
    degrees = data.user_degrees()
    dropped = (degrees > 0) & (n_test >= degrees)
    retained = ~dropped[data.users]
    if dropped.any():
        logger.warning(f"Dropping {int(dropped.sum())} users with no "
                       f"training pairs left")
    result = SplitDataset(train=data.subset(retained & ~is_test),
                          test=data.subset(retained & is_test),
                          seed=seed)
    logger.info(f"Split {data}: {result}")
    return result
