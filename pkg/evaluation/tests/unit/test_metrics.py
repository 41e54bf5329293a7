import math

import numpy as np

from django.test import SimpleTestCase

from evaluation.metrics import hr_at_k, ndcg_at_k, rank_topk


class RankTopKTests(SimpleTestCase):

    def test_ties_go_to_smaller_ids(self):
        self.assertEqual([0, 1, 2], rank_topk(np.zeros(10), 3).tolist())

    def test_large_score_first(self):
        scores = np.zeros(10)
        scores[7] = 1e300
        self.assertEqual(7, rank_topk(scores, 3)[0])

    def test_excluded_items_never_returned(self):
        scores = np.arange(10, dtype=float)
        topk = rank_topk(scores, 4, exclude=[9, 8])
        self.assertEqual([7, 6, 5, 4], topk.tolist())

    def test_length_and_uniqueness(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            scores = rng.integers(0, 3, size=15).astype(float)
            exclude = rng.choice(15, size=5, replace=False)
            topk = rank_topk(scores, 20, exclude)
            self.assertEqual(10, len(topk))
            self.assertEqual(len(topk), len(set(topk.tolist())))
            self.assertFalse(set(topk.tolist()) & set(exclude.tolist()))
            expected = sorted(set(range(15)) - set(exclude.tolist()),
                              key=lambda i: (-scores[i], i))
            self.assertEqual(expected, topk.tolist())

    def test_everything_excluded(self):
        self.assertEqual(0, len(rank_topk(np.zeros(2), 5, exclude=[0, 1])))


class HitRatioTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(0.5, hr_at_k([5, 1, 2], [1, 9], 3))
        self.assertEqual(1.0, hr_at_k([5, 1, 9], [1, 9], 3))
        self.assertEqual(0.0, hr_at_k([5, 6, 7], [1, 9], 3))

    def test_denominator_is_capped_by_k(self):
        self.assertEqual(1.0, hr_at_k([0, 1], [0, 1, 2, 3], 2))

    def test_empty_test(self):
        with self.assertRaises(ValueError):
            hr_at_k([0], [], 1)


class NDCGTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(1.0, ndcg_at_k([4, 0, 1], [4], 3))
        self.assertAlmostEqual(0.5, ndcg_at_k([0, 1, 4], [4], 3),
                               places=12)
        self.assertEqual(0.0, ndcg_at_k([0, 1, 2], [4], 3))

    def test_ideal_ranking(self):
        self.assertAlmostEqual(1.0, ndcg_at_k([3, 2, 0], [2, 3], 3),
                               places=12)

    def test_two_hits(self):
        expected = (1 + 1 / math.log2(4)) / (1 + 1 / math.log2(3))
        self.assertAlmostEqual(expected, ndcg_at_k([2, 0, 3], [2, 3], 3),
                               places=12)
