import numpy as np

from django.test import SimpleTestCase

from interactions.data_functions.popularity import compute_popularity, \
    popular_proportion
from interactions.datasets import InteractionDataset
from interactions.tests.common import make_dataset
from recsys_workspace.utils.exceptions import EmptyDatasetError


def counts_dataset(counts):
    """Item j interacted by users 0..counts[j]-1."""
    pairs = [(u, j) for j, c in enumerate(counts) for u in range(c)]
    return make_dataset(pairs)


class ComputePopularityTests(SimpleTestCase):

    def test_max_normalization(self):
        stats = compute_popularity(counts_dataset([4, 2, 1]))
        self.assertEqual([4, 2, 1], stats.counts.tolist())
        self.assertEqual([1.0, 0.5, 0.25], stats.i_pop.tolist())

    def test_single_item(self):
        stats = compute_popularity(counts_dataset([7]))
        self.assertEqual([1.0], stats.i_pop.tolist())

    def test_percentile_threshold(self):
        stats = compute_popularity(counts_dataset(range(1, 11)))
        self.assertAlmostEqual(8.2, stats.popular_threshold)
        self.assertEqual([8, 9], np.flatnonzero(stats.is_popular).tolist())

    def test_unseen_items_have_zero_popularity(self):
        train = make_dataset([(0, 0), (1, 0)], num_items=3)
        stats = compute_popularity(train)
        self.assertEqual([1.0, 0.0, 0.0], stats.i_pop.tolist())

    def test_monotone_in_count(self):
        stats = compute_popularity(counts_dataset([3, 9, 1, 9, 5]))
        order = np.argsort(stats.counts, kind='stable')
        self.assertTrue((np.diff(stats.i_pop[order]) >= 0).all())
        self.assertTrue(((stats.i_pop >= 0) & (stats.i_pop <= 1)).all())

    def test_empty_train(self):
        with self.assertRaises(EmptyDatasetError):
            compute_popularity(InteractionDataset.empty(2, 2))


class PopularProportionTests(SimpleTestCase):

    def test_proportion(self):
        stats = compute_popularity(counts_dataset(range(1, 11)))
        test = make_dataset([(0, 9), (0, 1), (1, 8), (1, 2)], num_items=10)
        self.assertEqual(0.5, popular_proportion(test, stats))
        self.assertEqual(0.0, popular_proportion(
            InteractionDataset.empty(2, 10), stats))
