import logging
import math

import numpy as np

from recsys_workspace.utils.exceptions import EmptyDatasetError, \
    InfeasibleInterventionError

logger = logging.getLogger(__name__)

# Slack for comparing proportions computed in floating point
PROPORTION_TOLERANCE = 1e-9


def popular_keep_count(n_popular, n_unpopular, target):
    """Largest p <= n_popular with p / (p + n_unpopular) <= target."""
    if target >= 1:
        return n_popular
    keep = math.floor(target * n_unpopular / (1 - target)
                      + PROPORTION_TOLERANCE)
    keep = min(keep, n_popular)
    while keep > 0 and keep / (keep + n_unpopular) > target \
            + PROPORTION_TOLERANCE:
        keep -= 1
    return keep


def build_intervened_test(test, stats, target_popular_prop, seed):
    """Downsample the popular-item pairs of ``test`` so their share is
    at most ``target_popular_prop``.  Unpopular pairs are all kept.
    """
    if test.is_empty():
        raise EmptyDatasetError("Cannot intervene on an empty test set")
    if not 0 < target_popular_prop <= 1:
        raise InfeasibleInterventionError(
            f"Popular proportion must be in (0, 1], "
            f"got {target_popular_prop}")

    popular = stats.is_popular[test.items]
    n_popular = int(popular.sum())
    n_unpopular = len(test) - n_popular
    observed = n_popular / len(test)
    if target_popular_prop > observed + PROPORTION_TOLERANCE:
        logger.error(f"Target popular proportion {target_popular_prop} "
                     f"is above the observed {observed:.4f}")
        raise InfeasibleInterventionError(
            f"Cannot raise the popular proportion from {observed:.4f} to "
            f"{target_popular_prop} by downsampling")

    keep = popular_keep_count(n_popular, n_unpopular, target_popular_prop)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(np.flatnonzero(popular), size=keep, replace=False)
    mask = ~popular
    mask[chosen] = True
    intervened = test.subset(mask)

    achieved = keep / (keep + n_unpopular) if keep + n_unpopular else 0.0
    logger.info(f"Intervened test set at target {target_popular_prop}: "
                f"kept {keep}/{n_popular} popular and {n_unpopular} "
                f"unpopular pairs, achieved proportion {achieved:.4f}")
    return intervened
