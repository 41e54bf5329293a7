import logging

import numpy as np

from causal_embedding.constants import CAUSE_TABLES, INTEREST, \
    MAX_NEGATIVE_ATTEMPTS
from causal_embedding.losses import ContrastiveBatch
from recsys_workspace.utils.exceptions import TrainingError

logger = logging.getLogger(__name__)


class TrainingBatch(object):
    """B sampled rows plus the in-batch negative masks.

    Column j of either mask stands for ``pos_items[j]``: row r may use
    it as a negative when the mask is set.
    """

    def __init__(self, users, pos_items, neg_items, interest_mask,
                 conformity_mask, pos_pop):
        self.users = users
        self.pos_items = pos_items
        self.neg_items = neg_items
        self.interest_mask = interest_mask
        self.conformity_mask = conformity_mask
        self.pos_pop = pos_pop

    def __len__(self):
        return len(self.users)

    def interest_negatives(self, row):
        return self.pos_items[self.interest_mask[row]].tolist()

    def conformity_negatives(self, row):
        return self.pos_items[self.conformity_mask[row]].tolist()

    def contrastive(self, emb, cause):
        """Contrastive operands over the cause's tables of ``emb``."""
        user_table, item_table = emb.cause(cause)
        mask = self.interest_mask if cause == INTEREST \
            else self.conformity_mask
        return ContrastiveBatch(
            user_table[self.users], item_table[self.pos_items],
            np.arange(len(self)), mask, self.pos_pop,
            self.users, self.pos_items, CAUSE_TABLES[cause])

    def __repr__(self):
        return f"TrainingBatch B={len(self)}"


def sample_negatives(train, users, rng, max_attempts=MAX_NEGATIVE_ATTEMPTS):
    """One item per user that the user has no training pair with,
    by rejection sampling."""
    negatives = rng.integers(0, train.num_items, size=len(users))
    pending = np.flatnonzero(train.contains(users, negatives))
    attempts = 1
    while len(pending):
        if attempts >= max_attempts:
            user = int(users[pending[0]])
            logger.error(f"Negative sampling for user {user} failed after "
                         f"{attempts} attempts")
            raise TrainingError(
                f"No negative item found for user {user} after "
                f"{attempts} attempts; the catalog is too dense")
        negatives[pending] = rng.integers(0, train.num_items,
                                          size=len(pending))
        pending = pending[train.contains(users[pending],
                                         negatives[pending])]
        attempts += 1
    return negatives


def in_batch_masks(train, stats, users, pos_items, false_negative_filter):
    """Interest negatives of row r are the positives of rows with another
    user, minus the user's own training items when filtering; conformity
    negatives also must not be more popular than row r's positive."""
    interest = users[:, None] != users[None, :]
    if false_negative_filter:
        interest &= ~train.contains(users[:, None], pos_items[None, :])
    pos_pop = stats.i_pop[pos_items]
    conformity = interest & (pos_pop[None, :] <= pos_pop[:, None])
    return interest, conformity


def sample_batch(train, stats, batch_size, rng, false_negative_filter=True):
    if batch_size < 2:
        raise ValueError(f"batch size must be at least 2, got {batch_size}")
    if train.is_empty():
        raise TrainingError("Cannot sample from an empty training set")
    picks = rng.integers(0, len(train), size=batch_size)
    users = train.users[picks]
    pos_items = train.items[picks]
    neg_items = sample_negatives(train, users, rng)
    interest, conformity = in_batch_masks(train, stats, users, pos_items,
                                          false_negative_filter)
    return TrainingBatch(users, pos_items, neg_items, interest, conformity,
                         stats.i_pop[pos_items])

