import numpy as np


class SparseGrad(object):
    """Gradient rows of one table: ``values[k]`` belongs to row
    ``indices[k]``.  Indices may repeat until coalesced."""

    def __init__(self, indices, values):
        self.indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        self.values = np.asarray(values, dtype=np.float64)
        if self.values.ndim != 2 or len(self.values) != len(self.indices):
            raise ValueError("values must be one row per index")

    @classmethod
    def empty(cls, d):
        return cls(np.zeros(0, dtype=np.int64), np.zeros((0, d)))

    @classmethod
    def from_dense(cls, dense):
        rows = np.flatnonzero(np.any(dense != 0, axis=1))
        return cls(rows, dense[rows])

    @property
    def d(self):
        return self.values.shape[1]

    def coalesce(self):
        """Sum repeated rows; indices come out sorted and unique."""
        rows, inverse = np.unique(self.indices, return_inverse=True)
        values = np.zeros((len(rows), self.d))
        np.add.at(values, inverse, self.values)
        return SparseGrad(rows, values)

    def scaled(self, factor):
        return SparseGrad(self.indices, self.values * factor)

    def __add__(self, other):
        return SparseGrad(
            np.concatenate([self.indices, other.indices]),
            np.concatenate([self.values, other.values])).coalesce()

    def to_dense(self, num_rows):
        dense = np.zeros((num_rows, self.d))
        np.add.at(dense, self.indices, self.values)
        return dense

    def __repr__(self):
        return f"SparseGrad rows={len(self.indices)} d={self.d}"


def merge_grads(*weighted):
    """Merge (coefficient, {table: SparseGrad}) pairs by sparse addition.
    Terms with a zero coefficient are left out."""
    merged = {}
    for coefficient, grads in weighted:
        if not coefficient or grads is None:
            continue
        for table, grad in grads.items():
            term = grad if coefficient == 1 else grad.scaled(coefficient)
            merged[table] = merged[table] + term if table in merged \
                else term.coalesce()
    return merged
