"""Synthetic interactions with known interest and conformity causes.

Each user has a unit interest vector and a conformity level in [0, 1];
each item has a unit content vector and a popularity in [0, 1] taken
from power-law draws.  A pair interacts with probability

    sigmoid(a * <interest_u, content_i> + b * conformity_u * pop_i + c)

where ``c`` is solved for so the expected density hits the target.  Unless
it is given, ``b`` is solved for too, so that the conformity term accounts
for a set share of the expected interactions.  The
out-of-distribution test set is drawn after replacing every item's
popularity by the mean popularity, which removes the conformity cause's
preference for popular items.
"""

import logging
import os

import numpy as np
from scipy import optimize, stats
from scipy.special import expit

from interactions.data_functions.popularity import compute_popularity
from interactions.data_functions.split import split
from interactions.data_functions.storage import write_dataset, \
    write_popularity, write_split
from interactions.constants import POPULARITY_FILENAME
from interactions.datasets import InteractionDataset, SplitDataset
from recsys_workspace.utils.exceptions import CalibrationError
from synthetic.constants import CONFORMITY_FILENAME, DEFAULT_CONFORMITY_MIX, \
    DEFAULT_CONFORMITY_SHARE, DEFAULT_DENSITY, DEFAULT_DIM, \
    DEFAULT_INTEREST_SCALE, DEFAULT_ITEMS, DEFAULT_POP_EXPONENT, \
    DEFAULT_TEST_FRACTION, DEFAULT_USERS, DENSITY_TOLERANCE, MIX_BRACKET, \
    OFFSET_BRACKET, TEST_OOD_FILENAME, TRUE_POP_FILENAME

logger = logging.getLogger(__name__)


class SyntheticWorld(object):
    """Ground truth of a generated dataset."""

    def __init__(self, user_interest, item_content, item_pop,
                 user_conformity, pop_draws, pop_exponent, interest_scale,
                 conformity_mix, offset):
        self.user_interest = user_interest
        self.item_content = item_content
        self.item_pop = item_pop
        self.user_conformity = user_conformity
        self.pop_draws = pop_draws
        self.pop_exponent = pop_exponent
        self.interest_scale = interest_scale
        self.conformity_mix = conformity_mix
        self.offset = offset

    @property
    def num_users(self):
        return len(self.user_interest)

    @property
    def num_items(self):
        return len(self.item_content)

    def logits(self, item_pop=None):
        item_pop = self.item_pop if item_pop is None else item_pop
        return (self.interest_scale
                * (self.user_interest @ self.item_content.T)
                + self.conformity_mix
                * np.outer(self.user_conformity, item_pop))

    def conformity_share(self):
        """Share of the expected interactions the conformity term adds
        over the interest term alone."""
        full = expit(self.logits() + self.offset).sum()
        interest_only = expit(self.logits(np.zeros(self.num_items))
                              + self.offset).sum()
        return float(1 - interest_only / full) if full else 0.0

    def __repr__(self):
        return (f"SyntheticWorld users={self.num_users} "
                f"items={self.num_items} a={self.interest_scale} "
                f"b={self.conformity_mix} c={self.offset:.4f}")


def _unit_rows(rng, rows, d):
    vectors = rng.normal(size=(rows, d))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def calibrate_offset(logits, density):
    """The offset c with mean(sigmoid(logits + c)) = density."""
    if not 0 < density <= 0.5:
        raise CalibrationError(f"Density must be in (0, 0.5], got {density}")

    def excess(c):
        return expit(logits + c).mean() - density

    try:
        offset = optimize.brentq(excess, *OFFSET_BRACKET, xtol=1e-12)
    except ValueError as e:
        logger.error(f"Calibration to density {density} failed: {e}")
        raise CalibrationError(f"Cannot reach density {density}: {e}")
    achieved = excess(offset) + density
    if abs(achieved - density) > DENSITY_TOLERANCE * density:
        raise CalibrationError(f"Calibration reached density {achieved}, "
                               f"wanted {density}")
    return offset


def calibrate_conformity_mix(world, density, share):
    """Solve for the mix b at which the conformity term accounts for
    ``share`` of the expected interactions, re-fitting the offset to
    ``density`` at every b.  ``world`` is left at the solution."""
    if not 0 < share < 1:
        raise CalibrationError(f"Conformity share must be in (0, 1), "
                               f"got {share}")

    def excess(mix):
        world.conformity_mix = mix
        world.offset = calibrate_offset(world.logits(), density)
        return world.conformity_share() - share

    try:
        mix = optimize.brentq(excess, *MIX_BRACKET, xtol=1e-6)
    except ValueError as e:
        logger.error(f"Calibration to conformity share {share} failed: {e}")
        raise CalibrationError(f"Cannot reach conformity share {share}: "
                               f"{e}")
    excess(mix)
    logger.debug(f"Conformity mix {mix:.4f} gives share {share}")
    return mix


def _draw(probabilities, rng):
    users, items = np.nonzero(rng.random(probabilities.shape)
                              < probabilities)
    return users, items


def generate_synthetic(n_users=DEFAULT_USERS, n_items=DEFAULT_ITEMS,
                       dim=DEFAULT_DIM, density=DEFAULT_DENSITY,
                       pop_exponent=DEFAULT_POP_EXPONENT,
                       conformity_mix=DEFAULT_CONFORMITY_MIX, seed=0,
                       interest_scale=DEFAULT_INTEREST_SCALE,
                       test_fraction=DEFAULT_TEST_FRACTION,
                       conformity_share=DEFAULT_CONFORMITY_SHARE):
    """Returns (train, test_iid, test_ood, world).  With
    ``conformity_mix=None`` the mix is solved for ``conformity_share``."""
    if pop_exponent <= 1:
        raise ValueError(f"pop_exponent must be above 1, got {pop_exponent}")
    if min(n_users, n_items, dim) < 1:
        raise ValueError("n_users, n_items and dim must be positive")
    world_seq, draw_seq, ood_seq = np.random.SeedSequence(seed).spawn(3)
    rng = np.random.default_rng(world_seq)
    pop_draws = rng.zipf(pop_exponent, n_items)
    top = np.log(pop_draws.max())
    item_pop = np.log(pop_draws) / top if top > 0 else np.zeros(n_items)
    world = SyntheticWorld(
        user_interest=_unit_rows(rng, n_users, dim),
        item_content=_unit_rows(rng, n_items, dim),
        item_pop=item_pop,
        user_conformity=rng.random(n_users),
        pop_draws=pop_draws,
        pop_exponent=pop_exponent,
        interest_scale=interest_scale,
        conformity_mix=conformity_mix or 0.0,
        offset=0.0)
    if conformity_mix is None:
        calibrate_conformity_mix(world, density, conformity_share)
    else:
        world.offset = calibrate_offset(world.logits(), density)
    logits = world.logits()

    users, items = _draw(expit(logits + world.offset),
                         np.random.default_rng(draw_seq))
    data = InteractionDataset(users, items, n_users, n_items)
    split_data = split(data, test_fraction, seed)
    train = split_data.train

    # popularity edge removed: every item gets the mean popularity
    ood_logits = world.logits(np.full(n_items, item_pop.mean()))
    ood_offset = calibrate_offset(ood_logits, density * test_fraction)
    users, items = _draw(expit(ood_logits + ood_offset),
                         np.random.default_rng(ood_seq))
    keep = ~train.contains(users, items) \
        & (train.user_degrees()[users] > 0)
    test_ood = train.view(users[keep], items[keep])

    logger.info(f"Generated {world}: train={len(train)} "
                f"test_iid={len(split_data.test)} test_ood={len(test_ood)}")
    return train, split_data.test, test_ood, world


def write_synthetic(out_dir, train, test_iid, test_ood, world, seed,
                    test_fraction=DEFAULT_TEST_FRACTION):
    """Write a prepared data directory (test_iid as the test split) plus
    the OOD test set and the ground-truth sidecars."""
    os.makedirs(out_dir, exist_ok=True)
    write_split(SplitDataset(train, test_iid, seed), test_fraction, out_dir)
    write_popularity(compute_popularity(train),
                     os.path.join(out_dir, POPULARITY_FILENAME))
    write_dataset(test_ood, os.path.join(out_dir, TEST_OOD_FILENAME))
    with open(os.path.join(out_dir, TRUE_POP_FILENAME), 'w',
              encoding='utf-8') as f:
        f.write('item_id\ttrue_pop\n')
        for item, pop in enumerate(world.item_pop.tolist()):
            f.write(f"{item}\t{pop!r}\n")
    with open(os.path.join(out_dir, CONFORMITY_FILENAME), 'w',
              encoding='utf-8') as f:
        f.write('user_id\tconformity\n')
        for user, level in enumerate(world.user_conformity.tolist()):
            f.write(f"{user}\t{level!r}\n")
    logger.info(f"Wrote synthetic data to {out_dir}")


def power_law_ks(world):
    """Kolmogorov-Smirnov distance between the popularity draws and the
    configured discrete power law."""
    draws = np.sort(world.pop_draws)
    law = stats.zipf(world.pop_exponent)
    # the supremum over a step CDF is reached at a jump or just before it
    support = np.unique(draws)
    below = np.searchsorted(draws, support, side='left') / len(draws)
    at = np.searchsorted(draws, support, side='right') / len(draws)
    return float(max(np.abs(at - law.cdf(support)).max(),
                     np.abs(below - law.cdf(support - 1)).max()))
