import logging
import os

from causal_embedding.checkpoint import load_checkpoint
from evaluation.constants import REPORT_FLAT_FILENAME, REPORT_TEXT_FILENAME
from evaluation.evaluator import evaluate
from evaluation.reports import write_report_flat, write_report_text
from interactions.data_functions.storage import read_prepared
from recsys_workspace.management.base import PipelineCommand
from recsys_workspace.utils.exceptions import ConfigError

logger = logging.getLogger(__name__)


class Command(PipelineCommand):
    help = 'Full-ranking HR@K and NDCG@K of a checkpoint on the test split'
    command_name = 'eval'

    def add_pipeline_arguments(self, parser):
        parser.add_argument('--checkpoint', help='Checkpoint file')
        parser.add_argument('--data', help='Prepared data directory')
        parser.add_argument('--top-k', type=int, dest='top_k')

    def check_config(self, config):
        if not config.checkpoint or not config.data:
            raise ConfigError("eval needs --checkpoint and --data")
        if config.top_k < 1:
            raise ConfigError(f"top_k must be at least 1, got "
                              f"{config.top_k}")

    def run(self, config, run_dir, run):
        checkpoint = load_checkpoint(config.checkpoint)
        split_data, stats = read_prepared(config.data)
        embeddings = checkpoint.forward(split_data.train)
        report = evaluate(embeddings, split_data.test, stats, config.top_k,
                          exclude=split_data.train, threads=config.threads)
        report.config_hash = run.config_hash
        report.seed = config.seed
        rows = report.rows()
        write_report_text(report, os.path.join(run_dir,
                                               REPORT_TEXT_FILENAME))
        write_report_flat(rows, os.path.join(run_dir, REPORT_FLAT_FILENAME))
        self.stdout.write(f"HR@{report.k}={100 * report.hr:.3f} "
                          f"NDCG@{report.k}={100 * report.ndcg:.3f}")
        return rows
