import numpy as np


def rank_topk(scores, k, exclude=()):
    """Top ``k`` item ids by score, excluded items left out.  Ties go to
    the smaller item id."""
    scores = np.asarray(scores, dtype=np.float64)
    valid = np.ones(len(scores), dtype=bool)
    valid[np.asarray(exclude, dtype=np.int64)] = False
    candidates = np.flatnonzero(valid)
    k = min(k, len(candidates))
    if k <= 0:
        return np.zeros(0, dtype=np.int64)
    candidate_scores = scores[candidates]
    if k < len(candidates):
        cut = len(candidates) - k
        kth = np.partition(candidate_scores, cut)[cut]
        keep = candidate_scores >= kth
        candidates = candidates[keep]
        candidate_scores = candidate_scores[keep]
    order = np.argsort(-candidate_scores, kind='stable')[:k]
    return candidates[order]


def discounts(n):
    """1 / log2(p + 1) for positions p = 1..n."""
    return 1.0 / np.log2(np.arange(2, n + 2))


def hit_positions(topk, test_items):
    """1-based positions of the test items found in ``topk``."""
    return np.flatnonzero(np.isin(topk, test_items)) + 1


def hr_at_k(topk, test_items, k):
    """Hits over min(k, |test|)."""
    if not len(test_items):
        raise ValueError("empty test set")
    hits = len(hit_positions(np.asarray(topk)[:k], test_items))
    return hits / min(k, len(test_items))


def ndcg_at_k(topk, test_items, k):
    if not len(test_items):
        raise ValueError("empty test set")
    positions = hit_positions(np.asarray(topk)[:k], test_items)
    dcg = (1.0 / np.log2(positions + 1)).sum()
    idcg = discounts(min(k, len(test_items))).sum()
    return float(dcg / idcg)
