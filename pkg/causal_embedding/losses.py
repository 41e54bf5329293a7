"""BPR main loss and the popularity-weighted in-batch contrastive losses,
with analytic gradients.

Every loss returns a LossOutput whose gradients are SparseGrad rows keyed
by table name and taken w.r.t. the embeddings the loss was given (the
backbone output).  Values are means over the N rows of the batch.
"""

import logging

import numpy as np
from scipy.special import expit, logsumexp

from causal_embedding.constants import CONFORMITY, DEGENERATE_WEIGHT, \
    EMPTY_NEGATIVES, INTEREST, ITEM_CONF, ITEM_INT, LITERAL, LOSS_MODES, \
    USER_CONF, USER_INT, WEIGHTED
from causal_embedding.gradients import SparseGrad, merge_grads

logger = logging.getLogger(__name__)

ROW_USER_TABLE = 'user'
ROW_ITEM_TABLE = 'item'


class LossOutput(object):
    def __init__(self, value, grads, counts=None):
        self.value = float(value)
        self.grads = grads
        self.counts = counts or {}

    def __repr__(self):
        return (f"LossOutput value={self.value:.6g} "
                f"tables={sorted(self.grads)}")


class ContrastiveRow(object):
    """One user with its positive item, its negatives and the positive
    item's popularity."""

    def __init__(self, user_vec, pos_vec, neg_vecs, i_pop):
        self.user_vec = np.asarray(user_vec, dtype=np.float64)
        self.pos_vec = np.asarray(pos_vec, dtype=np.float64)
        self.neg_vecs = [np.asarray(v, dtype=np.float64) for v in neg_vecs]
        if not 0 <= i_pop <= 1:
            raise ValueError(f"i_pop must be in [0, 1], got {i_pop}")
        self.i_pop = float(i_pop)


class ContrastiveBatch(object):
    """Operands of an in-batch contrastive loss.

    ``scores = user_vecs @ item_vecs.T``; row r's positive is column
    ``pos_index[r]`` and its negatives are the columns set in
    ``neg_mask[r]``.  ``user_rows``/``item_rows`` give the table row of
    every user vector and item column, under the ``tables`` names.
    """

    def __init__(self, user_vecs, item_vecs, pos_index, neg_mask, i_pop,
                 user_rows, item_rows, tables):
        self.user_vecs = np.asarray(user_vecs, dtype=np.float64)
        self.item_vecs = np.asarray(item_vecs, dtype=np.float64)
        self.pos_index = np.asarray(pos_index, dtype=np.int64)
        self.neg_mask = np.array(neg_mask, dtype=bool)
        self.i_pop = np.asarray(i_pop, dtype=np.float64)
        self.user_rows = np.asarray(user_rows, dtype=np.int64)
        self.item_rows = np.asarray(item_rows, dtype=np.int64)
        self.tables = tables
        n, m = len(self.user_vecs), len(self.item_vecs)
        if self.neg_mask.shape != (n, m):
            raise ValueError(f"neg_mask must be {n}x{m}")
        if self.user_vecs.shape[1] != self.item_vecs.shape[1]:
            raise ValueError("user and item vectors differ in dimension")
        self.neg_mask[np.arange(n), self.pos_index] = False

    @classmethod
    def from_rows(cls, rows):
        n = len(rows)
        if not n:
            raise ValueError("no rows")
        negatives = [v for row in rows for v in row.neg_vecs]
        item_vecs = np.vstack([row.pos_vec for row in rows] + negatives)
        mask = np.zeros((n, len(item_vecs)), dtype=bool)
        offset = n
        for r, row in enumerate(rows):
            mask[r, offset:offset + len(row.neg_vecs)] = True
            offset += len(row.neg_vecs)
        return cls(np.vstack([row.user_vec for row in rows]), item_vecs,
                   np.arange(n), mask, [row.i_pop for row in rows],
                   np.arange(n), np.arange(len(item_vecs)),
                   (ROW_USER_TABLE, ROW_ITEM_TABLE))

    def __len__(self):
        return len(self.user_vecs)

    def negative_counts(self):
        return self.neg_mask.sum(axis=1)


def _as_batch(rows):
    if isinstance(rows, ContrastiveBatch):
        return rows
    return ContrastiveBatch.from_rows(list(rows))


def bpr_loss(s_pos, s_neg):
    """-ln sigmoid(s_pos - s_neg) and its derivatives w.r.t. both
    scores."""
    x = np.subtract(s_pos, s_neg, dtype=np.float64)
    value = np.logaddexp(0.0, -x)
    d_neg = expit(-x)
    if np.ndim(x) == 0:
        return float(value), float(-d_neg), float(d_neg)
    return value, -d_neg, d_neg


def main_task_loss(emb, users, pos_items, neg_items):
    """Mean BPR over the composed score of each (user, pos, neg) row."""
    users = np.asarray(users, dtype=np.int64)
    pos_items = np.asarray(pos_items, dtype=np.int64)
    neg_items = np.asarray(neg_items, dtype=np.int64)
    n = len(users)
    u_int, u_conf = emb.user_int[users], emb.user_conf[users]
    p_int, p_conf = emb.item_int[pos_items], emb.item_conf[pos_items]
    n_int, n_conf = emb.item_int[neg_items], emb.item_conf[neg_items]
    s_pos = np.einsum('ij,ij->i', u_int, p_int) \
        + np.einsum('ij,ij->i', u_conf, p_conf)
    s_neg = np.einsum('ij,ij->i', u_int, n_int) \
        + np.einsum('ij,ij->i', u_conf, n_conf)
    values, d_pos, d_neg = bpr_loss(s_pos, s_neg)
    g_pos = (d_pos / n)[:, None]
    g_neg = (d_neg / n)[:, None]
    items = np.concatenate([pos_items, neg_items])
    grads = {
        USER_INT: SparseGrad(users, g_pos * p_int + g_neg * n_int),
        USER_CONF: SparseGrad(users, g_pos * p_conf + g_neg * n_conf),
        ITEM_INT: SparseGrad(items, np.vstack([g_pos * u_int,
                                               g_neg * u_int])),
        ITEM_CONF: SparseGrad(items, np.vstack([g_pos * u_conf,
                                                g_neg * u_conf])),
    }
    return LossOutput(values.mean(),
                      {table: grad.coalesce()
                       for table, grad in grads.items()})


def _softmax_terms(batch):
    """Per-row InfoNCE term and the softmax over {positive} + negatives."""
    n = len(batch)
    rows = np.arange(n)
    scores = batch.user_vecs @ batch.item_vecs.T
    pos_scores = scores[rows, batch.pos_index]
    logits = np.where(batch.neg_mask, scores, -np.inf)
    logits[rows, batch.pos_index] = pos_scores
    lse = logsumexp(logits, axis=1)
    probs = np.exp(logits - lse[:, None])
    return lse - pos_scores, probs


def _contrastive_output(batch, probs, coef, value, counts):
    rows = np.arange(len(batch))
    weights = coef[:, None] * probs
    weights[rows, batch.pos_index] -= coef
    user_table, item_table = batch.tables
    grads = {
        user_table: SparseGrad(batch.user_rows,
                               weights @ batch.item_vecs).coalesce(),
        item_table: SparseGrad(batch.item_rows,
                               weights.T @ batch.user_vecs).coalesce(),
    }
    return LossOutput(value, grads, counts)


def _empty_counts(batch):
    return {EMPTY_NEGATIVES: int((batch.negative_counts() == 0).sum())}


def info_nce(rows):
    """Unweighted mean of the per-row InfoNCE terms."""
    batch = _as_batch(rows)
    n = len(batch)
    terms, probs = _softmax_terms(batch)
    coef = np.full(n, 1.0 / n)
    return _contrastive_output(batch, probs, coef, terms.sum() / n,
                               _empty_counts(batch))


def interest_contrastive_loss(rows, mode=WEIGHTED):
    """InfoNCE on interest embeddings, weighted by exp(-i_pop)."""
    if mode not in LOSS_MODES:
        raise ValueError(f"Unknown loss mode '{mode}'")
    batch = _as_batch(rows)
    n = len(batch)
    terms, probs = _softmax_terms(batch)
    if mode == LITERAL:
        coef = np.full(n, 1.0 / n)
        value = (batch.i_pop + terms).sum() / n
    else:
        weights = np.exp(-batch.i_pop)
        coef = weights / n
        value = (weights * terms).sum() / n
    return _contrastive_output(batch, probs, coef, value,
                               _empty_counts(batch))


def conformity_contrastive_loss(rows, mode=WEIGHTED):
    """InfoNCE on conformity embeddings, weighted by 1 - exp(-i_pop).

    In literal mode rows with i_pop = 0 have no defined weight and are
    skipped; they are counted under ``degenerate_weight``.
    """
    if mode not in LOSS_MODES:
        raise ValueError(f"Unknown loss mode '{mode}'")
    batch = _as_batch(rows)
    n = len(batch)
    terms, probs = _softmax_terms(batch)
    counts = _empty_counts(batch)
    if mode == LITERAL:
        valid = batch.i_pop > 0
        coef = np.where(valid, 1.0 / n, 0.0)
        offsets = -np.log(-np.expm1(-batch.i_pop[valid]))
        value = (offsets + terms[valid]).sum() / n
        counts[DEGENERATE_WEIGHT] = int((~valid).sum())
        if counts[DEGENERATE_WEIGHT]:
            logger.debug(f"Skipped {counts[DEGENERATE_WEIGHT]} conformity "
                         f"rows with zero popularity")
    else:
        weights = -np.expm1(-batch.i_pop)
        coef = weights / n
        value = (weights * terms).sum() / n
    return _contrastive_output(batch, probs, coef, value, counts)


def filter_conformity_negatives(pos_pop, candidates):
    """Indices of the candidates no more popular than the positive."""
    return [index for index, pop in candidates if pop <= pos_pop]


def total_loss(main, int_loss, conf_loss, alpha, beta):
    """main + alpha * interest + beta * conformity.  A term with a zero
    coefficient is left out entirely."""
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be non-negative")
    value = main.value
    counts = dict(main.counts)
    for name, coefficient, loss in ((INTEREST, alpha, int_loss),
                                    (CONFORMITY, beta, conf_loss)):
        if coefficient and loss is not None:
            value += coefficient * loss.value
            for key, count in loss.counts.items():
                counts[f"{name}_{key}"] = count
    grads = merge_grads((1, main.grads),
                        (alpha, int_loss.grads if int_loss else None),
                        (beta, conf_loss.grads if conf_loss else None))
    return LossOutput(value, grads, counts)
