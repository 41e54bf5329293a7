import os
import unittest

import numpy as np

from causal_embedding.embeddings import DisentangledEmbeddings


def random_embeddings(num_users, num_items, d, seed=0, scale=0.5):
    rng = np.random.default_rng(seed)
    return DisentangledEmbeddings(
        rng.normal(0, scale, (num_users, d)),
        rng.normal(0, scale, (num_users, d)),
        rng.normal(0, scale, (num_items, d)),
        rng.normal(0, scale, (num_items, d)))


def numeric_gradient(loss, array, eps=1e-6):
    """Central differences of ``loss()`` w.r.t. every entry of ``array``,
    which is perturbed in place."""
    grad = np.zeros_like(array)
    for index in np.ndindex(*array.shape):
        original = array[index]
        array[index] = original + eps
        upper = loss()
        array[index] = original - eps
        lower = loss()
        array[index] = original
        grad[index] = (upper - lower) / (2 * eps)
    return grad


def dense(grads, table, num_rows, d):
    if table not in grads:
        return np.zeros((num_rows, d))
    return grads[table].to_dense(num_rows)


slow = unittest.skipUnless(os.environ.get('DCCL_SLOW_TESTS') == '1',
                           'set DCCL_SLOW_TESTS=1 to run')
