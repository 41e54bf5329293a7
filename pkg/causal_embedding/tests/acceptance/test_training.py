import time

import numpy as np

from django.test import SimpleTestCase

from causal_embedding.batching import sample_batch
from causal_embedding.constants import CONFORMITY, INTEREST
from causal_embedding.embeddings import init_embeddings
from causal_embedding.losses import conformity_contrastive_loss, \
    interest_contrastive_loss, main_task_loss
from causal_embedding.tests.common import slow
from causal_embedding.trainer import TrainConfig, Trainer
from interactions.data_functions.popularity import compute_popularity
from synthetic.generator import generate_synthetic


def median_time(func, repeats=9):
    func()
    timings = []
    for _ in range(repeats):
        started = time.perf_counter()
        func()
        timings.append(time.perf_counter() - started)
    return float(np.median(timings))


def doubling_factor(timer, sizes):
    """Time growth per doubling of the batch, from a log-log fit over
    ``sizes``."""
    times = [timer(size) for size in sizes]
    slope = np.polyfit(np.log2(sizes), np.log2(times), 1)[0]
    return float(2 ** slope)


@slow
class TrainingTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.train = generate_synthetic(density=0.02)[0]
        cls.stats = compute_popularity(cls.train)

    def test_loss_goes_down(self):
        config = TrainConfig(epochs=5, learning_rate=0.01,
                             validation_fraction=0.0)
        history = Trainer(config, self.train, self.stats).train().history
        self.assertLess(history[-1].total, history[0].total)
        self.assertLess(history[-1].main_loss, history[0].main_loss)

    def contrastive_time(self, batch_size):
        emb = init_embeddings(self.train.num_users, self.train.num_items,
                              64, seed=0)
        batch = sample_batch(self.train, self.stats, batch_size,
                             np.random.default_rng(0))

        def losses():
            interest_contrastive_loss(batch.contrastive(emb, INTEREST))
            conformity_contrastive_loss(batch.contrastive(emb, CONFORMITY))
        return median_time(losses)

    def main_loss_time(self, batch_size):
        emb = init_embeddings(self.train.num_users, self.train.num_items,
                              64, seed=0)
        rng = np.random.default_rng(0)
        picks = rng.integers(0, len(self.train), size=batch_size)
        users = self.train.users[picks]
        pos_items = self.train.items[picks]
        neg_items = rng.integers(0, self.train.num_items, size=batch_size)
        return median_time(lambda: main_task_loss(emb, users, pos_items,
                                                  neg_items), repeats=15)

    def test_contrastive_cost_is_quadratic_in_batch(self):
        factor = doubling_factor(self.contrastive_time,
                                 [1024, 1536, 2048, 3072])
        self.assertTrue(3 <= factor <= 6, factor)

    def test_main_loss_cost_is_linear_in_batch(self):
        factor = doubling_factor(self.main_loss_time,
                                 [4096, 8192, 16384, 32768])
        self.assertTrue(1.5 <= factor <= 2.6, factor)
