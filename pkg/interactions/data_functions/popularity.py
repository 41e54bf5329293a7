import logging

import numpy as np

from interactions.constants import POPULAR_PERCENTILE
from interactions.datasets import PopularityStats
from recsys_workspace.utils.exceptions import EmptyDatasetError

logger = logging.getLogger(__name__)


def popularity_from_counts(counts):
    counts = np.asarray(counts, dtype=np.int64)
    top = counts.max() if len(counts) else 0
    i_pop = counts / top if top > 0 else np.zeros(len(counts))
    # numpy's default percentile interpolates linearly
    threshold = float(np.percentile(counts, POPULAR_PERCENTILE))
    return PopularityStats(counts, i_pop, threshold, counts > threshold)


def compute_popularity(train):
    """Popularity of every catalog item, measured on training pairs only."""
    if train.is_empty():
        raise EmptyDatasetError(
            "Cannot compute popularity of an empty training set")
    stats = popularity_from_counts(train.item_degrees())
    logger.info(f"Computed {stats}")
    return stats


def popular_proportion(data, stats):
    """Share of the pairs in ``data`` that fall on popular items."""
    if data.is_empty():
        return 0.0
    return float(stats.is_popular[data.items].mean())
