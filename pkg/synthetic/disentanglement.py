import logging

from scipy import stats

logger = logging.getLogger(__name__)


def mean_cause_scores(user_table, item_table):
    """Every item's score under one cause, averaged over users."""
    return item_table @ user_table.mean(axis=0)


def disentanglement_score(emb, world):
    """Spearman correlations of the per-item mean conformity score and
    mean interest score with the true item popularity.

    Returns (conf_pop_corr, int_pop_corr).
    """
    if (emb.num_users, emb.num_items) != (world.num_users, world.num_items):
        raise ValueError(
            f"embeddings cover {emb.num_users} users and {emb.num_items} "
            f"items, world has {world.num_users} and {world.num_items}")
    conf = stats.spearmanr(mean_cause_scores(emb.user_conf, emb.item_conf),
                           world.item_pop).correlation
    interest = stats.spearmanr(mean_cause_scores(emb.user_int, emb.item_int),
                               world.item_pop).correlation
    logger.info(f"Disentanglement: conf_pop_corr={conf:.4f} "
                f"int_pop_corr={interest:.4f}")
    return float(conf), float(interest)
