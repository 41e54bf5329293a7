import logging
import os

from causal_embedding.trainer import TrainConfig, Trainer
from evaluation.constants import REPORT_FLAT_FILENAME
from evaluation.evaluator import evaluate, relative_degradation
from evaluation.reports import write_report_flat
from interactions.data_functions.popularity import compute_popularity, \
    popular_proportion
from recsys_workspace.management.base import PipelineCommand
from recsys_workspace.utils.exceptions import ConfigError
from synthetic.constants import ORACLE_REPORT_FILENAME
from synthetic.disentanglement import disentanglement_score
from synthetic.generator import generate_synthetic, power_law_ks, \
    write_synthetic

logger = logging.getLogger(__name__)

DATA_DIRNAME = 'data'


class Command(PipelineCommand):
    help = ('Generate a synthetic interest/conformity world, train the '
            'disentangled model and a plain backbone on it and report '
            'against the ground truth')
    command_name = 'synth'

    def add_pipeline_arguments(self, parser):
        parser.add_argument('--users', type=int, dest='synth_users')
        parser.add_argument('--items', type=int, dest='synth_items')
        parser.add_argument('--density', type=float, dest='synth_density')
        parser.add_argument('--pop-exponent', type=float,
                            dest='synth_pop_exponent')
        parser.add_argument('--conformity-mix', type=float,
                            dest='synth_conformity_mix')
        parser.add_argument('--conformity-share', type=float,
                            dest='synth_conformity_share')
        parser.add_argument('--epochs', type=int)
        parser.add_argument('--backbone', choices=['mf', 'lightgcn'])

    def check_config(self, config):
        if config.synth_pop_exponent <= 1:
            raise ConfigError("synth_pop_exponent must be above 1")
        self.train_config = TrainConfig.from_run_config(config)
        if not self.train_config.alpha and not self.train_config.beta:
            raise ConfigError("synth compares against the plain backbone; "
                              "alpha or beta must be positive")

    def run(self, config, run_dir, run):
        train, test_iid, test_ood, world = generate_synthetic(
            config.synth_users, config.synth_items, config.synth_dim,
            config.synth_density, config.synth_pop_exponent,
            config.synth_conformity_mix, config.seed,
            config.synth_interest_scale, config.test_fraction,
            config.synth_conformity_share)
        write_synthetic(os.path.join(run_dir, DATA_DIRNAME), train,
                        test_iid, test_ood, world, config.seed,
                        config.test_fraction)
        stats = compute_popularity(train)

        oracle = {
            'conformity_mix': world.conformity_mix,
            'conformity_share': world.conformity_share(),
            'power_law_ks': power_law_ks(world),
            'test_iid_popular_proportion': popular_proportion(test_iid,
                                                              stats),
            'test_ood_popular_proportion': popular_proportion(test_ood,
                                                              stats),
        }
        variants = [('dccl', self.train_config),
                    ('backbone',
                     self.train_config.replace(alpha=0.0, beta=0.0))]
        for name, train_config in variants:
            out_dir = os.path.join(run_dir, name)
            os.makedirs(out_dir)
            result = Trainer(train_config, train, stats, out_dir).train()
            embeddings = result.forward()
            iid = evaluate(embeddings, test_iid, stats, config.top_k,
                           exclude=train, threads=config.threads)
            ood = evaluate(embeddings, test_ood, stats, config.top_k,
                           exclude=train, threads=config.threads)
            conf_corr, int_corr = disentanglement_score(embeddings, world)
            oracle.update({
                f"{name}.conf_pop_corr": conf_corr,
                f"{name}.int_pop_corr": int_corr,
                f"{name}.test_iid.HR@{config.top_k}": iid.hr,
                f"{name}.test_ood.HR@{config.top_k}": ood.hr,
                f"{name}.test_iid.NDCG@{config.top_k}": iid.ndcg,
                f"{name}.test_ood.NDCG@{config.top_k}": ood.ndcg,
                f"{name}.degradation": relative_degradation(iid.hr, ood.hr),
            })

        rows = [(key, 'all', float(value)) for key, value in oracle.items()]
        with open(os.path.join(run_dir, ORACLE_REPORT_FILENAME), 'w',
                  encoding='utf-8') as f:
            f.write(f"config_hash={run.config_hash}\nseed={config.seed}\n")
            for key, value in oracle.items():
                f.write(f"{key}={float(value)!r}\n")
        write_report_flat(rows, os.path.join(run_dir, REPORT_FLAT_FILENAME))
        self.stdout.write(
            f"conf_pop_corr={oracle['dccl.conf_pop_corr']:.3f} "
            f"int_pop_corr={oracle['dccl.int_pop_corr']:.3f}")
        return rows
