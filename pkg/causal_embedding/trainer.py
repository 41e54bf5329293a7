"""The multi-task training loop.

One step samples a batch from the fit pairs, runs the backbone forward,
takes BPR on the composed score plus the two contrastive losses on the
cause-specific embeddings, carries the merged gradient back through the
backbone and applies one sparse Adam step.  Three seed streams are
spawned from the run seed: table initialization, the validation
carve-out and batch sampling.
"""

import logging
import math
import os
import time

import numpy as np

from causal_embedding.batching import sample_batch
from causal_embedding.checkpoint import save_checkpoint
from causal_embedding.constants import BACKBONES, \
    BEST_CHECKPOINT_FILENAME, CHECKPOINT_FILENAME, CONFORMITY, INTEREST, \
    LAST_CHECKPOINT_FILENAME, LOSS_MODES, TRAIN_LOG_COLUMNS, \
    TRAIN_LOG_FILENAME, VARIANT_BACKBONE, VARIANT_DCCL, VARIANT_WO_CPCL, \
    VARIANT_WO_IPCL, WEIGHTED, MF
from causal_embedding.embeddings import Backbone, init_embeddings
from causal_embedding.losses import conformity_contrastive_loss, \
    interest_contrastive_loss, main_task_loss, total_loss
from causal_embedding.optim import SparseAdam
from evaluation.evaluator import evaluate
from interactions.data_functions.split import holdout_mask
from recsys_workspace.utils.exceptions import ConfigError, \
    EmptyDatasetError, TrainingError

logger = logging.getLogger(__name__)


def variant_label(alpha, beta):
    if alpha and beta:
        return VARIANT_DCCL
    if alpha:
        return VARIANT_WO_CPCL
    if beta:
        return VARIANT_WO_IPCL
    return VARIANT_BACKBONE


class TrainConfig(object):
    def __init__(self, embedding_dim=64, batch_size=512, learning_rate=0.001,
                 alpha=0.1, beta=0.1, epochs=100, seed=0, backbone=MF,
                 layers=2, loss_mode=WEIGHTED, false_negative_filter=True,
                 validation_fraction=0.1, patience=10, top_k=20,
                 init_scale=0.1, adam_beta1=0.9, adam_beta2=0.999,
                 adam_eps=1e-8, threads=1):
        self.embedding_dim = embedding_dim
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.alpha = alpha
        self.beta = beta
        self.epochs = epochs
        self.seed = seed
        self.backbone = backbone
        self.layers = layers
        self.loss_mode = loss_mode
        self.false_negative_filter = false_negative_filter
        self.validation_fraction = validation_fraction
        self.patience = patience
        self.top_k = top_k
        self.init_scale = init_scale
        self.adam_beta1 = adam_beta1
        self.adam_beta2 = adam_beta2
        self.adam_eps = adam_eps
        self.threads = threads
        self.validate()

    @classmethod
    def from_run_config(cls, config):
        return cls(**{key: config[key] for key in (
            'embedding_dim', 'batch_size', 'learning_rate', 'alpha', 'beta',
            'epochs', 'seed', 'backbone', 'layers', 'loss_mode',
            'false_negative_filter', 'validation_fraction', 'patience',
            'top_k', 'init_scale', 'adam_beta1', 'adam_beta2', 'adam_eps',
            'threads')})

    def validate(self):
        if self.backbone not in BACKBONES:
            raise ConfigError(f"Unknown backbone '{self.backbone}'")
        if self.loss_mode not in LOSS_MODES:
            raise ConfigError(f"Unknown loss mode '{self.loss_mode}'")
        for name in ('embedding_dim', 'epochs', 'top_k'):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        if self.batch_size < 2:
            raise ConfigError(f"batch_size must be at least 2, got "
                              f"{self.batch_size}")
        for name in ('learning_rate', 'init_scale', 'adam_eps'):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.alpha < 0 or self.beta < 0:
            raise ConfigError("alpha and beta must be non-negative")
        if not 0 <= self.adam_beta1 < 1 or not 0 <= self.adam_beta2 < 1:
            raise ConfigError("Adam betas must be in [0, 1)")
        if self.layers < 0 or self.patience < 0:
            raise ConfigError("layers and patience must be non-negative")
        if not 0 <= self.validation_fraction < 1:
            raise ConfigError(f"validation_fraction must be in [0, 1), got "
                              f"{self.validation_fraction}")

    def replace(self, **changes):
        return TrainConfig(**dict(vars(self), **changes))

    @property
    def variant(self):
        return variant_label(self.alpha, self.beta)

    def __repr__(self):
        return (f"TrainConfig {self.variant} {self.backbone} "
                f"d={self.embedding_dim} B={self.batch_size} "
                f"lr={self.learning_rate} alpha={self.alpha} "
                f"beta={self.beta} seed={self.seed}")


class EpochStats(object):
    def __init__(self, epoch, main_loss, int_loss, conf_loss, total,
                 val_hr, wall_seconds):
        self.epoch = epoch
        self.main_loss = main_loss
        self.int_loss = int_loss
        self.conf_loss = conf_loss
        self.total = total
        self.val_hr = val_hr
        self.wall_seconds = wall_seconds

    def as_line(self):
        return '\t'.join([str(self.epoch)] + [
            f"{value:.6f}" for value in (
                self.main_loss, self.int_loss, self.conf_loss, self.total,
                self.val_hr, self.wall_seconds)])


class TrainResult(object):
    def __init__(self, embeddings, backbone, history, best_epoch,
                 checkpoint_path, counts):
        self.embeddings = embeddings
        self.backbone = backbone
        self.history = history
        self.best_epoch = best_epoch
        self.checkpoint_path = checkpoint_path
        self.counts = counts

    def forward(self):
        """The embeddings the model scores with."""
        return self.backbone.forward(self.embeddings)

    def __repr__(self):
        return (f"TrainResult epochs={len(self.history)} "
                f"best_epoch={self.best_epoch}")


def carve_validation(train, fraction, rng):
    """Split ``train`` into fit and validation pairs.  Users whose every
    pair would be held out keep them all in fit."""
    if not fraction:
        return train, train.empty(train.num_users, train.num_items,
                                  train.user_index, train.item_index)
    marked, n_marked = holdout_mask(train, fraction, rng)
    whole = n_marked >= train.user_degrees()
    marked &= ~whole[train.users]
    return train.subset(~marked), train.subset(marked)


class Trainer(object):
    def __init__(self, config, train, stats, out_dir=None):
        if train.is_empty():
            raise EmptyDatasetError("Cannot train on an empty training set")
        self.config = config
        self.train_data = train
        self.stats = stats
        self.out_dir = out_dir
        init_seq, carve_seq, batch_seq = \
            np.random.SeedSequence(config.seed).spawn(3)
        self.fit, self.validation = carve_validation(
            train, config.validation_fraction,
            np.random.default_rng(carve_seq))
        self.batch_rng = np.random.default_rng(batch_seq)
        self.params = init_embeddings(train.num_users, train.num_items,
                                      config.embedding_dim, init_seq,
                                      config.init_scale)
        self.backbone = Backbone.for_train(config.backbone, config.layers,
                                           self.fit)
        self.optimizer = SparseAdam(self.params, config.learning_rate,
                                    config.adam_beta1, config.adam_beta2,
                                    config.adam_eps)
        self.counts = {}
        logger.info(f"Training {config} on {len(self.fit)} pairs, "
                    f"validating on {len(self.validation)}")

    def step(self):
        """One optimization step; returns the loss terms."""
        config = self.config
        batch = sample_batch(self.fit, self.stats, config.batch_size,
                             self.batch_rng, config.false_negative_filter)
        forward = self.backbone.forward(self.params)
        main = main_task_loss(forward, batch.users, batch.pos_items,
                              batch.neg_items)
        int_loss = interest_contrastive_loss(
            batch.contrastive(forward, INTEREST), config.loss_mode) \
            if config.alpha else None
        conf_loss = conformity_contrastive_loss(
            batch.contrastive(forward, CONFORMITY), config.loss_mode) \
            if config.beta else None
        total = total_loss(main, int_loss, conf_loss, config.alpha,
                           config.beta)
        if not math.isfinite(total.value):
            logger.error(f"Loss became {total.value} at step "
                         f"{self.optimizer.state.t + 1}")
            raise TrainingError(f"Non-finite loss {total.value}")
        grads = self.backbone.backward(total.grads, self.params.num_users,
                                       self.params.num_items)
        self.optimizer.step(grads)
        for key, count in total.counts.items():
            self.counts[key] = self.counts.get(key, 0) + count
        return (main.value,
                int_loss.value if int_loss else 0.0,
                conf_loss.value if conf_loss else 0.0,
                total.value)

    def run_epoch(self, epoch):
        started = time.monotonic()
        steps = math.ceil(len(self.fit) / self.config.batch_size)
        sums = np.zeros(4)
        for _ in range(steps):
            sums += self.step()
        means = sums / steps
        val_hr = self.validate()
        stats = EpochStats(epoch, *means, val_hr,
                           time.monotonic() - started)
        logger.info(f"Epoch {epoch}: total={stats.total:.5f} "
                    f"main={stats.main_loss:.5f} int={stats.int_loss:.5f} "
                    f"conf={stats.conf_loss:.5f} val_HR={val_hr:.4f}")
        return stats

    def validate(self):
        if self.validation.is_empty():
            return float('nan')
        report = evaluate(self.backbone.forward(self.params),
                          self.validation, self.stats, self.config.top_k,
                          exclude=self.fit, threads=self.config.threads)
        return report.hr

    def _path(self, name):
        return os.path.join(self.out_dir, name) if self.out_dir else None

    def _save(self, name, params):
        path = self._path(name)
        if path:
            save_checkpoint(path, params, self.config.backbone,
                            self.backbone.layers)
        return path

    def _log_header(self):
        path = self._path(TRAIN_LOG_FILENAME)
        if not path:
            return None
        config = self.config
        with open(path, 'w', encoding='utf-8') as f:
            f.write(f"# variant={config.variant} backbone={config.backbone} "
                    f"loss_mode={config.loss_mode} seed={config.seed}\n")
            f.write('\t'.join(TRAIN_LOG_COLUMNS) + '\n')
        return path

    def train(self):
        log_path = self._log_header()
        history = []
        best_hr = -math.inf
        best_epoch = None
        best_params = None
        stale = 0
        for epoch in range(1, self.config.epochs + 1):
            stats = self.run_epoch(epoch)
            history.append(stats)
            if log_path:
                with open(log_path, 'a', encoding='utf-8') as f:
                    f.write(stats.as_line() + '\n')
            self._save(LAST_CHECKPOINT_FILENAME, self.params)
            if math.isnan(stats.val_hr):
                continue
            if stats.val_hr > best_hr:
                best_hr, best_epoch, stale = stats.val_hr, epoch, 0
                best_params = self.params.copy()
                self._save(BEST_CHECKPOINT_FILENAME, best_params)
            else:
                stale += 1
                if self.config.patience and stale >= self.config.patience:
                    logger.info(f"Validation HR has not improved for "
                                f"{stale} epochs; stopping at epoch {epoch}")
                    break

        final = best_params if best_params is not None else self.params
        if best_epoch is None:
            best_epoch = len(history)
        checkpoint_path = self._save(CHECKPOINT_FILENAME, final)
        for key, count in sorted(self.counts.items()):
            if count:
                logger.warning(f"{count} batch rows with {key}")
        logger.info(f"Finished training; best epoch {best_epoch}")
        return TrainResult(final, self.backbone, history, best_epoch,
                           checkpoint_path, dict(self.counts))


def train(config, split_data, stats, out_dir=None):
    """Train on ``split_data.train``; the test pairs are never seen."""
    return Trainer(config, split_data.train, stats, out_dir).train()
