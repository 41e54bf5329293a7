"""Binary checkpoint of the four embedding tables.

Layout, all integers little-endian uint32:

    magic       8 bytes   b'DCCLCKPT'
    version     uint32    1
    num_users   uint32
    num_items   uint32
    d           uint32
    backbone    8 bytes   ASCII tag, NUL padded
    layers      uint32
    user_int    num_users * d float32, row-major
    user_conf   num_users * d float32
    item_int    num_items * d float32
    item_conf   num_items * d float32

Tables are stored as float32; loading gives float64 tables holding the
same values, so load then save reproduces the file byte for byte.
"""

import logging
import os
import struct

import numpy as np

from causal_embedding.constants import BACKBONES, CHECKPOINT_MAGIC, \
    CHECKPOINT_VERSION
from causal_embedding.embeddings import Backbone, DisentangledEmbeddings
from recsys_workspace.utils.exceptions import CheckpointError, \
    MissingInputError

logger = logging.getLogger(__name__)

HEADER = struct.Struct('<8sIIII8sI')
TABLE_DTYPE = np.dtype('<f4')


class Checkpoint(object):
    def __init__(self, embeddings, backbone, layers):
        self.embeddings = embeddings
        self.backbone = backbone
        self.layers = layers

    def forward(self, train):
        """Scoring embeddings, propagating over the ``train`` graph for
        lightgcn checkpoints."""
        emb = self.embeddings
        if (emb.num_users, emb.num_items) != (train.num_users,
                                              train.num_items):
            raise CheckpointError(
                f"Checkpoint has {emb.num_users} users and {emb.num_items} "
                f"items, data has {train.num_users} and {train.num_items}")
        return Backbone.for_train(self.backbone, self.layers,
                                  train).forward(emb)

    def __repr__(self):
        return (f"Checkpoint {self.backbone} layers={self.layers} "
                f"{self.embeddings}")


def save_checkpoint(path, embeddings, backbone, layers):
    if backbone not in BACKBONES:
        raise CheckpointError(f"Unknown backbone '{backbone}'")
    if not embeddings.is_finite():
        raise CheckpointError("Refusing to save non-finite embeddings")
    header = HEADER.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
                         embeddings.num_users, embeddings.num_items,
                         embeddings.d, backbone.encode('ascii'), layers)
    tmp_path = f"{path}.tmp"
    with open(tmp_path, 'wb') as f:
        f.write(header)
        for table in (embeddings.user_int, embeddings.user_conf,
                      embeddings.item_int, embeddings.item_conf):
            f.write(np.ascontiguousarray(table, dtype=TABLE_DTYPE)
                    .tobytes())
    os.replace(tmp_path, path)
    logger.debug(f"Saved {embeddings} to {path}")


def load_checkpoint(path):
    if not os.path.isfile(path):
        raise MissingInputError(f"Checkpoint {path} not found")
    with open(path, 'rb') as f:
        blob = f.read()
    if len(blob) < HEADER.size:
        raise CheckpointError(f"{path}: truncated header")
    magic, version, num_users, num_items, d, tag, layers = \
        HEADER.unpack_from(blob)
    if magic != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint")
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"{path}: unsupported version {version}")
    backbone = tag.rstrip(b'\0').decode('ascii', errors='replace')
    if backbone not in BACKBONES:
        raise CheckpointError(f"{path}: unknown backbone '{backbone}'")

    sizes = [num_users * d, num_users * d, num_items * d, num_items * d]
    expected = HEADER.size + sum(sizes) * TABLE_DTYPE.itemsize
    if len(blob) != expected:
        raise CheckpointError(f"{path}: expected {expected} bytes, "
                              f"found {len(blob)}")
    tables = []
    offset = HEADER.size
    for size, rows in zip(sizes, (num_users, num_users, num_items,
                                  num_items)):
        table = np.frombuffer(blob, dtype=TABLE_DTYPE, count=size,
                              offset=offset)
        tables.append(table.reshape(rows, d).astype(np.float64))
        offset += size * TABLE_DTYPE.itemsize
    checkpoint = Checkpoint(DisentangledEmbeddings(*tables), backbone,
                            layers)
    logger.debug(f"Loaded {checkpoint} from {path}")
    return checkpoint
