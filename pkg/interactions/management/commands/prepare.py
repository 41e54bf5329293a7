import logging
import os

from interactions.data_functions.filtering import k_core_filter
from interactions.data_functions.load import binarize, load_interactions
from interactions.data_functions.popularity import compute_popularity, \
    popular_proportion
from interactions.data_functions.split import split
from interactions.data_functions.storage import write_prepared
from interactions.data_functions.summary import compare_published, \
    dataset_summary
from interactions.constants import PUBLISHED_STATS
from recsys_workspace.management.base import PipelineCommand
from recsys_workspace.utils.exceptions import ConfigError, EmptyDatasetError

logger = logging.getLogger(__name__)

SUMMARY_FILENAME = 'summary.txt'


class Command(PipelineCommand):
    help = 'Binarize, k-core filter and split an interaction log'
    command_name = 'prepare'

    def add_pipeline_arguments(self, parser):
        parser.add_argument('--input', help='CSV/TSV interaction log')
        parser.add_argument('--format', choices=['csv', 'tsv'])
        parser.add_argument('--k-core', type=int, dest='k_core')
        parser.add_argument('--test-fraction', type=float,
                            dest='test_fraction')
        parser.add_argument('--published', choices=sorted(PUBLISHED_STATS),
                            help='Compare counts with a published dataset')

    def handle(self, *args, **options):
        self.published = options.get('published')
        return super().handle(*args, **options)

    def check_config(self, config):
        if not config.input:
            raise ConfigError("prepare needs --input")
        if config.k_core < 1:
            raise ConfigError(f"k_core must be at least 1, got "
                              f"{config.k_core}")
        if not 0 < config.test_fraction < 1:
            raise ConfigError(f"test_fraction must be in (0, 1), got "
                              f"{config.test_fraction}")

    def run(self, config, run_dir, run):
        raw = load_interactions(config.input, config.format)
        data = k_core_filter(binarize(raw), config.k_core)
        if data.is_empty():
            raise EmptyDatasetError(
                f"No interactions survive {config.k_core}-core filtering "
                f"of {config.input}")
        split_data = split(data, config.test_fraction, config.seed)
        if split_data.train.is_empty():
            raise EmptyDatasetError("The training split is empty")
        stats = compute_popularity(split_data.train)
        write_prepared(run_dir, data, split_data, stats,
                       config.test_fraction)

        summary = dataset_summary(data)
        summary['train_pairs'] = len(split_data.train)
        summary['test_pairs'] = len(split_data.test)
        summary['test_popular_proportion'] = popular_proportion(
            split_data.test, stats)
        rows = [(name, 'all', float(value))
                for name, value in summary.items()]
        differences = compare_published(summary, self.published)
        if differences:
            rows += [(f"{name}_rel_diff", self.published, value)
                     for name, value in differences.items()]

        with open(os.path.join(run_dir, SUMMARY_FILENAME), 'w',
                  encoding='utf-8') as f:
            for name, group, value in rows:
                f.write(f"{name}\t{group}\t{value!r}\n")
        self.stdout.write(
            f"users={summary['users']} items={summary['items']} "
            f"pairs={summary['pairs']} sparsity={summary['sparsity']:.4e}")
        if differences:
            self.stdout.write(
                f"vs {self.published}: " + ' '.join(
                    f"{name}={value:+.2%}"
                    for name, value in differences.items()))
        return rows
