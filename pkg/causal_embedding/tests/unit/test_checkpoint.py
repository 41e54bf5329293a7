import os

import numpy as np

from django.test import SimpleTestCase

from causal_embedding.checkpoint import HEADER, load_checkpoint, \
    save_checkpoint
from causal_embedding.constants import LIGHTGCN, MF
from causal_embedding.embeddings import lightgcn_propagate, \
    build_norm_adjacency
from causal_embedding.tests.common import random_embeddings
from interactions.tests.common import TempDirMixin, make_dataset
from recsys_workspace.utils.exceptions import CheckpointError, \
    MissingInputError


class CheckpointTests(TempDirMixin, SimpleTestCase):

    def setUp(self, *args, **kwargs):
        super().setUp(*args, **kwargs)
        self.emb = random_embeddings(3, 4, 2)
        self.path = os.path.join(self.tmpdir, 'checkpoint.bin')

    def read_bytes(self, path=None):
        with open(path or self.path, 'rb') as f:
            return f.read()

    def test_round_trip(self):
        save_checkpoint(self.path, self.emb, LIGHTGCN, 2)
        checkpoint = load_checkpoint(self.path)
        self.assertEqual(LIGHTGCN, checkpoint.backbone)
        self.assertEqual(2, checkpoint.layers)
        for name, table in self.emb.tables().items():
            np.testing.assert_array_equal(
                table.astype(np.float32),
                checkpoint.embeddings.table(name))

    def test_resave_is_byte_identical(self):
        save_checkpoint(self.path, self.emb, MF, 0)
        checkpoint = load_checkpoint(self.path)
        again = os.path.join(self.tmpdir, 'again.bin')
        save_checkpoint(again, checkpoint.embeddings, checkpoint.backbone,
                        checkpoint.layers)
        self.assertEqual(self.read_bytes(), self.read_bytes(again))

    def test_layout(self):
        save_checkpoint(self.path, self.emb, MF, 0)
        blob = self.read_bytes()
        self.assertEqual(b'DCCLCKPT', blob[:8])
        self.assertEqual(HEADER.size + 4 * (3 * 2 * 2 + 4 * 2 * 2),
                         len(blob))
        magic, version, users, items, d, tag, layers = \
            HEADER.unpack_from(blob)
        self.assertEqual((1, 3, 4, 2, b'mf\0\0\0\0\0\0', 0),
                         (version, users, items, d, tag, layers))
        first = np.frombuffer(blob, dtype='<f4', count=2,
                              offset=HEADER.size)
        np.testing.assert_array_equal(
            self.emb.user_int[0].astype(np.float32), first)

    def test_missing(self):
        with self.assertRaises(MissingInputError):
            load_checkpoint(self.path)

    def test_bad_magic(self):
        save_checkpoint(self.path, self.emb, MF, 0)
        blob = self.read_bytes()
        with open(self.path, 'wb') as f:
            f.write(b'NOTACKPT' + blob[8:])
        with self.assertRaises(CheckpointError):
            load_checkpoint(self.path)

    def test_truncated(self):
        save_checkpoint(self.path, self.emb, MF, 0)
        blob = self.read_bytes()
        with open(self.path, 'wb') as f:
            f.write(blob[:-4])
        with self.assertRaises(CheckpointError):
            load_checkpoint(self.path)
        with open(self.path, 'wb') as f:
            f.write(blob[:10])
        with self.assertRaises(CheckpointError):
            load_checkpoint(self.path)

    def test_refuses_bad_input(self):
        with self.assertRaises(CheckpointError):
            save_checkpoint(self.path, self.emb, 'gat', 0)
        self.emb.item_conf[1, 0] = np.inf
        with self.assertRaises(CheckpointError):
            save_checkpoint(self.path, self.emb, MF, 0)
        self.assertFalse(os.path.exists(self.path))

    def test_forward(self):
        train = make_dataset([(0, 0), (1, 1), (2, 2), (2, 3)])
        save_checkpoint(self.path, self.emb, LIGHTGCN, 1)
        checkpoint = load_checkpoint(self.path)
        expected = lightgcn_propagate(checkpoint.embeddings,
                                      build_norm_adjacency(train), 1)
        self.assertEqual(expected, checkpoint.forward(train))
        with self.assertRaises(CheckpointError):
            checkpoint.forward(make_dataset([(0, 0)], num_users=3,
                                            num_items=5))
