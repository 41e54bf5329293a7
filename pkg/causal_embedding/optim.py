import logging

import numpy as np

from recsys_workspace.utils.exceptions import TrainingError

logger = logging.getLogger(__name__)


class AdamState(object):
    """First and second moments for every table, plus the global step."""

    def __init__(self, tables, beta1=0.9, beta2=0.999, eps=1e-8):
        self.m = {name: np.zeros_like(table) for name, table in tables.items()}
        self.v = {name: np.zeros_like(table) for name, table in tables.items()}
        self.t = 0
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps

    def __repr__(self):
        return f"AdamState t={self.t}"


def adam_step(tables, grads, state, lr):
    """Lazy Adam over row-sparse gradients.

    Only rows with a non-zero gradient have their moments and values
    updated; bias correction uses the global step.  ``tables`` are updated
    in place and returned with the state.
    """
    for name, grad in grads.items():
        if name not in tables:
            raise KeyError(f"No table '{name}'")
        bad = ~np.isfinite(grad.values).all(axis=1)
        if bad.any():
            row = int(grad.indices[bad.argmax()])
            logger.error(f"Non-finite gradient for {name} row {row}")
            raise TrainingError(f"Non-finite gradient in table {name}, "
                                f"row {row}")

    state.t += 1
    bias1 = 1 - state.beta1 ** state.t
    bias2 = 1 - state.beta2 ** state.t
    for name, grad in grads.items():
        grad = grad.coalesce()
        live = np.any(grad.values != 0, axis=1)
        rows = grad.indices[live]
        if not len(rows):
            continue
        if rows[0] < 0 or rows[-1] >= len(tables[name]):
            raise IndexError(f"gradient row out of range for {name}")
        g = grad.values[live]
        m = state.m[name]
        v = state.v[name]
        m[rows] = state.beta1 * m[rows] + (1 - state.beta1) * g
        v[rows] = state.beta2 * v[rows] + (1 - state.beta2) * g * g
        m_hat = m[rows] / bias1
        v_hat = v[rows] / bias2
        tables[name][rows] -= lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return tables, state


class SparseAdam(object):
    """Adam bound to the tables of a DisentangledEmbeddings."""

    def __init__(self, embeddings, lr=0.001, beta1=0.9, beta2=0.999,
                 eps=1e-8):
        self.tables = embeddings.tables()
        self.lr = lr
        self.state = AdamState(self.tables, beta1, beta2, eps)

    def step(self, grads):
        adam_step(self.tables, grads, self.state, self.lr)
