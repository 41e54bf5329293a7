import numpy as np

from django.test import SimpleTestCase

from causal_embedding.batching import in_batch_masks, sample_batch, \
    sample_negatives
from causal_embedding.constants import CONFORMITY, INTEREST, ITEM_CONF, \
    USER_CONF
from causal_embedding.tests.common import random_embeddings
from interactions.data_functions.popularity import compute_popularity
from interactions.datasets import InteractionDataset, PopularityStats
from interactions.tests.common import make_dataset
from recsys_workspace.utils.exceptions import TrainingError


def flat_stats(i_pop):
    i_pop = np.asarray(i_pop, dtype=np.float64)
    return PopularityStats(np.zeros(len(i_pop)), i_pop, 0.0, i_pop > 0)


class SampleBatchTests(SimpleTestCase):

    def test_same_user_rows_have_no_negatives(self):
        train = make_dataset([(0, 0), (0, 1)], num_items=3)
        batch = sample_batch(train, compute_popularity(train), 2,
                             np.random.default_rng(0))
        self.assertEqual([0, 0], batch.users.tolist())
        self.assertFalse(batch.interest_mask.any())
        self.assertFalse(batch.conformity_mask.any())
        self.assertEqual([2, 2], batch.neg_items.tolist())

    def test_rows_come_from_train(self):
        train = make_dataset([(u, (u + k) % 7) for u in range(5)
                              for k in range(3)], num_items=7)
        batch = sample_batch(train, compute_popularity(train), 64,
                             np.random.default_rng(1))
        self.assertEqual(64, len(batch))
        self.assertTrue(train.contains(batch.users, batch.pos_items).all())
        self.assertFalse(train.contains(batch.users, batch.neg_items).any())
        np.testing.assert_array_equal(
            compute_popularity(train).i_pop[batch.pos_items],
            batch.pos_pop)

    def test_deterministic(self):
        train = make_dataset([(u, (u * 3 + k) % 11) for u in range(6)
                              for k in range(4)], num_items=11)
        stats = compute_popularity(train)
        first = sample_batch(train, stats, 16, np.random.default_rng(5))
        second = sample_batch(train, stats, 16, np.random.default_rng(5))
        np.testing.assert_array_equal(first.users, second.users)
        np.testing.assert_array_equal(first.neg_items, second.neg_items)
        np.testing.assert_array_equal(first.conformity_mask,
                                      second.conformity_mask)

    def test_bad_arguments(self):
        train = make_dataset([(0, 0)], num_items=2)
        with self.assertRaises(ValueError):
            sample_batch(train, compute_popularity(train), 1,
                         np.random.default_rng(0))
        with self.assertRaises(TrainingError):
            sample_batch(InteractionDataset.empty(1, 2),
                         flat_stats([0, 0]), 4, np.random.default_rng(0))

    def test_contrastive_operands(self):
        train = make_dataset([(0, 0), (1, 1), (2, 2)], num_items=4)
        batch = sample_batch(train, compute_popularity(train), 3,
                             np.random.default_rng(2))
        emb = random_embeddings(3, 4, 2)
        operands = batch.contrastive(emb, CONFORMITY)
        self.assertEqual((USER_CONF, ITEM_CONF), operands.tables)
        np.testing.assert_array_equal(emb.user_conf[batch.users],
                                      operands.user_vecs)
        np.testing.assert_array_equal(emb.item_conf[batch.pos_items],
                                      operands.item_vecs)
        np.testing.assert_array_equal(
            batch.interest_mask,
            batch.contrastive(emb, INTEREST).neg_mask)


class InBatchMaskTests(SimpleTestCase):

    def test_distinct_users_and_items(self):
        train = make_dataset([(0, 0), (1, 1), (2, 2)])
        interest, _ = in_batch_masks(train, flat_stats([0.5] * 3),
                                     np.array([0, 1, 2]),
                                     np.array([0, 1, 2]), True)
        self.assertEqual([2, 2, 2], interest.sum(axis=1).tolist())
        self.assertFalse(interest.diagonal().any())

    def test_zero_popularity_positive(self):
        train = make_dataset([(0, 0), (1, 1), (2, 2)])
        _, conformity = in_batch_masks(train, flat_stats([0.0, 0.0, 0.5]),
                                       np.array([0, 1, 2]),
                                       np.array([0, 1, 2]), True)
        self.assertEqual([False, True, False], conformity[0].tolist())
        self.assertEqual([True, True, False], conformity[2].tolist())

    def test_popularity_tie_is_kept(self):
        train = make_dataset([(0, 0), (1, 1)])
        _, conformity = in_batch_masks(train, flat_stats([0.4, 0.4]),
                                       np.array([0, 1]), np.array([0, 1]),
                                       True)
        self.assertTrue(conformity[0, 1] and conformity[1, 0])

    def test_false_negative_filter(self):
        # user 0 also has item 1, row 1's positive
        train = make_dataset([(0, 0), (0, 1), (1, 1)])
        users, items = np.array([0, 1]), np.array([0, 1])
        stats = flat_stats([0.5, 0.5])
        filtered, _ = in_batch_masks(train, stats, users, items, True)
        unfiltered, _ = in_batch_masks(train, stats, users, items, False)
        self.assertFalse(filtered[0, 1])
        self.assertTrue(unfiltered[0, 1])
        self.assertTrue(filtered[1, 0])


class SampleNegativesTests(SimpleTestCase):

    def test_never_collides(self):
        rng = np.random.default_rng(0)
        dense = rng.random((50, 20)) < 0.5
        dense[:, 0] = False
        users, items = np.nonzero(dense)
        train = InteractionDataset(users, items, 50, 20)
        sampled_users = rng.integers(0, 50, size=100000)
        negatives = sample_negatives(train, sampled_users, rng)
        self.assertFalse(train.contains(sampled_users, negatives).any())

    def test_exhaustion(self):
        train = make_dataset([(0, 0), (0, 1)])
        with self.assertRaises(TrainingError):
            sample_negatives(train, np.array([0]), np.random.default_rng(0))
