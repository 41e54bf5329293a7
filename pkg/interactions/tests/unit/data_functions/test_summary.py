from django.test import SimpleTestCase

from interactions.data_functions.summary import compare_published, \
    dataset_summary
from interactions.tests.common import make_dataset


class SummaryTests(SimpleTestCase):

    def test_summary(self):
        summary = dataset_summary(make_dataset([(0, 0), (1, 1)]))
        self.assertEqual({'users': 2, 'items': 2, 'pairs': 2,
                          'sparsity': 0.5}, summary)

    def test_compare_published(self):
        summary = {'users': 27057, 'items': 17843 * 2,
                   'sparsity': 1.007e-3}
        diff = compare_published(summary, 'yelp')
        self.assertAlmostEqual(0.0, diff['users'])
        self.assertAlmostEqual(1.0, diff['items'])
        self.assertAlmostEqual(0.0, diff['sparsity'])
        self.assertIsNone(compare_published(summary, 'unknown'))
