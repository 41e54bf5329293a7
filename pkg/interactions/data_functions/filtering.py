import logging

import numpy as np

from interactions.constants import DEFAULT_K_CORE
from interactions.datasets import InteractionDataset

logger = logging.getLogger(__name__)


def compact(data, keep):
    """Keep the masked pairs and renumber users and items that still
    have pairs, preserving their relative id order."""
    users = data.users[keep]
    items = data.items[keep]
    kept_users = np.unique(users)
    kept_items = np.unique(items)
    user_keys = {i: key for key, i in data.user_index.items()}
    item_keys = {i: key for key, i in data.item_index.items()}
    user_index = {user_keys[old]: new
                  for new, old in enumerate(kept_users.tolist())
                  if old in user_keys}
    item_index = {item_keys[old]: new
                  for new, old in enumerate(kept_items.tolist())
                  if old in item_keys}
    return InteractionDataset(
        np.searchsorted(kept_users, users),
        np.searchsorted(kept_items, items),
        len(kept_users), len(kept_items), user_index, item_index)


def k_core_filter(data, k=DEFAULT_K_CORE):
    """Repeatedly drop users and items with fewer than ``k`` pairs until
    every survivor has at least ``k``."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    keep = np.ones(len(data), dtype=bool)
    rounds = 0
    while True:
        user_deg = np.bincount(data.users[keep], minlength=data.num_users)
        item_deg = np.bincount(data.items[keep], minlength=data.num_items)
        next_keep = keep & (user_deg[data.users] >= k) \
            & (item_deg[data.items] >= k)
        if np.array_equal(next_keep, keep):
            break
        keep = next_keep
        rounds += 1

    filtered = compact(data, keep)
    if filtered.is_empty():
        logger.warning(f"{k}-core filtering removed every interaction "
                       f"of {data}")
    else:
        logger.info(f"{k}-core after {rounds} rounds: {filtered}")
    return filtered
