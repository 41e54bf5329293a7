"""Full-ranking top-K evaluation.

Every test user is scored against the whole catalog, its training items
are excluded, and HR@K / NDCG@K are averaged over users.  The popularity
breakdown credits each test pair to the quintile of its item: a pair
carries weight 1/|T_u| and its share of the user's HR or NDCG, so the
weight-averaged group metrics give back the overall ones.
"""

from concurrent.futures import ThreadPoolExecutor
import logging

import numpy as np

from evaluation.constants import ALL_GROUP, DEFAULT_TOP_K, \
    EVAL_CHUNK_SIZE, GROUP_LABELS, NUM_POPULARITY_GROUPS
from evaluation.metrics import discounts, rank_topk
from interactions.data_functions.intervention import build_intervened_test
from interactions.data_functions.popularity import popular_proportion
from recsys_workspace.utils.exceptions import EmptyDatasetError

logger = logging.getLogger(__name__)


class GroupMetrics(object):
    def __init__(self, label, hr, ndcg, item_count, pair_count, weight):
        self.label = label
        self.hr = hr
        self.ndcg = ndcg
        self.item_count = item_count
        self.pair_count = pair_count
        self.weight = weight

    def __repr__(self):
        return f"{self.label}: hr={self.hr:.4f} ndcg={self.ndcg:.4f}"


class MetricsReport(object):
    def __init__(self, k, hr, ndcg, per_group, num_users_evaluated,
                 skipped_users=0, config_hash=None, seed=None, label=None,
                 extra=None):
        self.k = k
        self.hr = hr
        self.ndcg = ndcg
        self.per_group = per_group
        self.num_users_evaluated = num_users_evaluated
        self.skipped_users = skipped_users
        self.config_hash = config_hash
        self.seed = seed
        self.label = label
        self.extra = dict(extra or {})

    def group(self, label):
        return next(g for g in self.per_group if g.label == label)

    def rows(self):
        """Flat (name, group, value) rows."""
        prefix = f"{self.label}." if self.label else ''
        rows = [(f"{prefix}HR@{self.k}", ALL_GROUP, self.hr),
                (f"{prefix}NDCG@{self.k}", ALL_GROUP, self.ndcg),
                (f"{prefix}num_users", ALL_GROUP,
                 float(self.num_users_evaluated)),
                (f"{prefix}skipped_users", ALL_GROUP,
                 float(self.skipped_users))]
        for g in self.per_group:
            rows.append((f"{prefix}HR@{self.k}", g.label, g.hr))
            rows.append((f"{prefix}NDCG@{self.k}", g.label, g.ndcg))
            rows.append((f"{prefix}pairs", g.label, float(g.pair_count)))
        rows += [(f"{prefix}{key}", ALL_GROUP, float(value))
                 for key, value in sorted(self.extra.items())]
        return rows

    def __repr__(self):
        return (f"MetricsReport {self.label or ''} HR@{self.k}="
                f"{self.hr:.4f} NDCG@{self.k}={self.ndcg:.4f} "
                f"users={self.num_users_evaluated}")


class _Partial(object):
    """Sums over one chunk of users."""

    def __init__(self, n_groups):
        self.hr = 0.0
        self.ndcg = 0.0
        self.users = 0
        self.group_hr = np.zeros(n_groups)
        self.group_ndcg = np.zeros(n_groups)
        self.group_weight = np.zeros(n_groups)
        self.group_pairs = np.zeros(n_groups, dtype=np.int64)

    def merge(self, other):
        self.hr += other.hr
        self.ndcg += other.ndcg
        self.users += other.users
        self.group_hr += other.group_hr
        self.group_ndcg += other.group_ndcg
        self.group_weight += other.group_weight
        self.group_pairs += other.group_pairs
        return self


def _evaluate_chunk(embeddings, users, test_items, exclude_items, groups,
                    k):
    partial = _Partial(NUM_POPULARITY_GROUPS)
    scores = embeddings.score_all(users)
    for row, user in enumerate(users.tolist()):
        targets = test_items[user]
        topk = rank_topk(scores[row], k, exclude_items.get(user, ()))
        cutoff = min(k, len(targets))
        idcg = discounts(cutoff).sum()
        # 1-based rank of every target, 0 for misses
        ranks = np.zeros(len(targets), dtype=np.int64)
        found = np.isin(topk, targets)
        ranks[np.searchsorted(targets, topk[found])] = \
            np.flatnonzero(found) + 1
        hit = ranks > 0
        hr_credit = hit / cutoff
        ndcg_credit = np.zeros(len(targets))
        ndcg_credit[hit] = 1.0 / np.log2(ranks[hit] + 1) / idcg

        item_groups = groups[targets]
        partial.hr += hr_credit.sum()
        partial.ndcg += ndcg_credit.sum()
        partial.users += 1
        np.add.at(partial.group_hr, item_groups, hr_credit)
        np.add.at(partial.group_ndcg, item_groups, ndcg_credit)
        np.add.at(partial.group_weight, item_groups, 1.0 / len(targets))
        np.add.at(partial.group_pairs, item_groups, 1)
    return partial


def evaluate(embeddings, test, stats, k=DEFAULT_TOP_K, exclude=None,
             threads=1, chunk_size=EVAL_CHUNK_SIZE):
    """HR@K and NDCG@K of ``embeddings`` on ``test``.

    ``embeddings`` is anything with ``num_users``, ``num_items`` and
    ``score_all(users)``; ``exclude`` is the dataset of training pairs to
    leave out of each user's ranking.
    """
    if test.is_empty():
        raise EmptyDatasetError("Cannot evaluate on an empty test set")
    if test.num_items != embeddings.num_items:
        raise ValueError(f"test set has {test.num_items} items, "
                         f"embeddings have {embeddings.num_items}")
    test_items = test.grouped_items()
    users = np.array(sorted(test_items), dtype=np.int64)
    known = users < embeddings.num_users
    skipped = int((~known).sum())
    if skipped:
        logger.warning(f"Skipping {skipped} test users unknown to the "
                       f"model")
    users = users[known]
    exclude_items = exclude.grouped_items() if exclude is not None else {}
    groups = stats.quantile_groups(NUM_POPULARITY_GROUPS)

    chunks = [users[start:start + chunk_size]
              for start in range(0, len(users), chunk_size)]

    def work(chunk):
        return _evaluate_chunk(embeddings, chunk, test_items, exclude_items,
                               groups, k)

    total = _Partial(NUM_POPULARITY_GROUPS)
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            partials = list(executor.map(work, chunks))
    else:
        partials = [work(chunk) for chunk in chunks]
    # merged in chunk order whatever the thread count
    for partial in partials:
        total.merge(partial)

    item_counts = np.bincount(groups, minlength=NUM_POPULARITY_GROUPS)
    per_group = []
    for g, label in enumerate(GROUP_LABELS):
        weight = total.group_weight[g]
        per_group.append(GroupMetrics(
            label,
            total.group_hr[g] / weight if weight else 0.0,
            total.group_ndcg[g] / weight if weight else 0.0,
            int(item_counts[g]), int(total.group_pairs[g]), float(weight)))
    n = total.users
    report = MetricsReport(k, total.hr / n if n else 0.0,
                           total.ndcg / n if n else 0.0,
                           per_group, n, skipped)
    logger.info(f"Evaluated {report}")
    return report


def relative_degradation(base_hr, hr):
    if not base_hr:
        return float('nan')
    return (base_hr - hr) / base_hr


def ood_sweep(embeddings, split, stats, proportions, seeds, k=DEFAULT_TOP_K,
              threads=1, base=None):
    """Evaluate on intervened copies of the test set, one per proportion
    and seed.  Each report's ``extra`` holds the target and achieved
    popular proportions and the relative HR degradation from ``base``
    (the evaluation on the original test set, computed if not given)."""
    if base is None:
        base = evaluate(embeddings, split.test, stats, k, split.train,
                        threads)
    reports = []
    for proportion in proportions:
        for seed in seeds:
            test = build_intervened_test(split.test, stats, proportion, seed)
            report = evaluate(embeddings, test, stats, k, split.train,
                              threads)
            report.seed = seed
            report.label = f"ood_p{proportion:g}_s{seed}"
            report.extra = {
                'target_proportion': proportion,
                'achieved_proportion': popular_proportion(test, stats),
                'degradation': relative_degradation(base.hr, report.hr),
            }
            reports.append(report)
        hrs = [r.hr for r in reports[-len(seeds):]]
        logger.info(f"Popular proportion {proportion}: HR@{k} mean "
                    f"{np.mean(hrs):.4f}, std over seeds {np.std(hrs):.4f}")
    return reports
