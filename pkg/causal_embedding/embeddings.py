"""Disentangled embedding tables and the backbone forward passes.

Every user and item has an interest vector and a conformity vector.  A
pair is scored by the sum of the two per-cause dot products, which is the
dot product of the concatenated ("composed") vectors.
"""

import logging

import numpy as np
from scipy import sparse

from causal_embedding.constants import BACKBONES, CAUSE_TABLES, \
    CONFORMITY, INTEREST, LIGHTGCN, MF, TABLES
from causal_embedding.gradients import SparseGrad

logger = logging.getLogger(__name__)


class DisentangledEmbeddings(object):

    def __init__(self, user_int, user_conf, item_int, item_conf):
        tables = [np.asarray(t, dtype=np.float64)
                  for t in (user_int, user_conf, item_int, item_conf)]
        if any(t.ndim != 2 for t in tables):
            raise ValueError("embedding tables must be 2-dimensional")
        if tables[0].shape != tables[1].shape \
                or tables[2].shape != tables[3].shape \
                or tables[0].shape[1] != tables[2].shape[1]:
            raise ValueError("embedding tables disagree in shape: "
                             + ', '.join(str(t.shape) for t in tables))
        self.user_int, self.user_conf, self.item_int, self.item_conf = tables

    @property
    def d(self):
        return self.user_int.shape[1]

    @property
    def num_users(self):
        return self.user_int.shape[0]

    @property
    def num_items(self):
        return self.item_int.shape[0]

    def table(self, name):
        if name not in TABLES:
            raise KeyError(name)
        return getattr(self, name)

    def tables(self):
        return {name: getattr(self, name) for name in TABLES}

    def cause(self, cause):
        user_table, item_table = CAUSE_TABLES[cause]
        return getattr(self, user_table), getattr(self, item_table)

    def copy(self):
        return DisentangledEmbeddings(*(t.copy() for t in self._ordered()))

    def _ordered(self):
        return (self.user_int, self.user_conf, self.item_int,
                self.item_conf)

    def composed(self):
        """(users x 2d, items x 2d) tables of concatenated vectors."""
        return (np.hstack([self.user_int, self.user_conf]),
                np.hstack([self.item_int, self.item_conf]))

    def score_all(self, users=None):
        """Composed scores of the given users (default all) against every
        item."""
        user_vecs, item_vecs = self.composed()
        if users is not None:
            user_vecs = user_vecs[np.asarray(users, dtype=np.int64)]
        return user_vecs @ item_vecs.T

    def is_finite(self):
        return all(np.isfinite(t).all() for t in self._ordered())

    def __eq__(self, other):
        return isinstance(other, DisentangledEmbeddings) and all(
            np.array_equal(a, b)
            for a, b in zip(self._ordered(), other._ordered()))

    def __repr__(self):
        return (f"DisentangledEmbeddings users={self.num_users} "
                f"items={self.num_items} d={self.d}")


def init_embeddings(num_users, num_items, d, seed, scale=0.1):
    """Four tables of i.i.d. normal(0, scale^2) entries."""
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    rng = np.random.default_rng(seed)
    return DisentangledEmbeddings(
        rng.normal(0.0, scale, (num_users, d)),
        rng.normal(0.0, scale, (num_users, d)),
        rng.normal(0.0, scale, (num_items, d)),
        rng.normal(0.0, scale, (num_items, d)))


def similarity(w, v):
    w = np.asarray(w, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if w.shape != v.shape:
        raise ValueError(f"dimension mismatch: {w.shape} vs {v.shape}")
    return float(w @ v)


def score(e_int_u, e_conf_u, e_int_i, e_conf_i):
    return similarity(e_int_u, e_int_i) + similarity(e_conf_u, e_conf_i)


def _check_rows(indices, size, what):
    indices = np.asarray(indices, dtype=np.int64)
    if len(indices) and (indices.min() < 0 or indices.max() >= size):
        raise IndexError(f"{what} index out of range [0, {size})")
    return indices


def mf_forward(emb, users, items):
    """Row gathers of the four tables; repeated indices give repeated
    rows."""
    users = _check_rows(users, emb.num_users, 'user')
    items = _check_rows(items, emb.num_items, 'item')
    return (emb.user_int[users], emb.user_conf[users],
            emb.item_int[items], emb.item_conf[items])


class NormAdjacency(object):
    """Symmetric D^-1/2 A D^-1/2 over users followed by items."""

    def __init__(self, matrix, num_users, num_items):
        self.matrix = matrix.tocsr()
        self.num_users = num_users
        self.num_items = num_items

    def propagate(self, user_table, item_table, layers):
        """Layer-averaged propagation of one stacked user/item table."""
        current = np.vstack([user_table, item_table])
        total = current.copy()
        for _ in range(layers):
            current = self.matrix @ current
            total += current
        total /= layers + 1
        return total[:self.num_users], total[self.num_users:]

    def __repr__(self):
        return (f"NormAdjacency nodes={self.matrix.shape[0]} "
                f"nnz={self.matrix.nnz}")


def build_norm_adjacency(train, allow_isolated=False):
    """Normalized bipartite adjacency of the training pairs.

    Isolated users or items are an error unless ``allow_isolated``, in
    which case their rows and columns stay empty.
    """
    user_deg = train.user_degrees()
    item_deg = train.item_degrees()
    isolated = int((user_deg == 0).sum() + (item_deg == 0).sum())
    if isolated and not allow_isolated:
        raise ValueError(f"{isolated} users or items have no training "
                         f"pairs")
    interactions = train.interaction_matrix()
    adjacency = sparse.bmat([[None, interactions],
                             [interactions.T, None]], format='csr')
    degrees = np.concatenate([user_deg, item_deg]).astype(np.float64)
    d_inv = np.zeros_like(degrees)
    d_inv[degrees > 0] = np.power(degrees[degrees > 0], -0.5)
    d_mat = sparse.diags(d_inv, format='csr')
    matrix = d_mat @ adjacency @ d_mat
    if isolated:
        logger.debug(f"{isolated} isolated nodes in the adjacency")
    return NormAdjacency(matrix, train.num_users, train.num_items)


def lightgcn_propagate(emb, adj, layers):
    """Propagate the interest tables and the conformity tables
    separately."""
    if layers < 0:
        raise ValueError(f"layers must be non-negative, got {layers}")
    user_int, item_int = adj.propagate(emb.user_int, emb.item_int, layers)
    user_conf, item_conf = adj.propagate(emb.user_conf, emb.item_conf,
                                         layers)
    return DisentangledEmbeddings(user_int, user_conf, item_int, item_conf)


class Backbone(object):
    """Maps parameter tables to the embeddings the losses see, and
    gradients back."""

    def __init__(self, tag=MF, layers=0, adjacency=None):
        if tag not in BACKBONES:
            raise ValueError(f"Unknown backbone '{tag}'")
        if tag == LIGHTGCN and adjacency is None:
            raise ValueError("lightgcn needs an adjacency")
        self.tag = tag
        self.layers = layers if tag == LIGHTGCN else 0
        self.adjacency = adjacency

    @classmethod
    def for_train(cls, tag, layers, train):
        adjacency = build_norm_adjacency(train, allow_isolated=True) \
            if tag == LIGHTGCN else None
        return cls(tag, layers, adjacency)

    def forward(self, emb):
        if self.tag == MF:
            return emb
        return lightgcn_propagate(emb, self.adjacency, self.layers)

    def backward(self, grads, num_users, num_items):
        """Gradients w.r.t. the forward output become gradients w.r.t.
        the parameters.  The propagation operator is symmetric, so the
        same operator carries them back."""
        if self.tag == MF:
            return grads
        result = {}
        for cause in (INTEREST, CONFORMITY):
            user_table, item_table = CAUSE_TABLES[cause]
            if user_table not in grads and item_table not in grads:
                continue
            d = next(grads[t].d for t in (user_table, item_table)
                     if t in grads)
            user_dense = grads[user_table].to_dense(num_users) \
                if user_table in grads else np.zeros((num_users, d))
            item_dense = grads[item_table].to_dense(num_items) \
                if item_table in grads else np.zeros((num_items, d))
            user_back, item_back = self.adjacency.propagate(
                user_dense, item_dense, self.layers)
            result[user_table] = SparseGrad.from_dense(user_back)
            result[item_table] = SparseGrad.from_dense(item_back)
        return result

    def __repr__(self):
        return f"Backbone {self.tag} layers={self.layers}"

