import logging
import os

from causal_embedding.checkpoint import load_checkpoint
from evaluation.constants import OOD_SUMMARY_FILENAME, \
    REPORT_FLAT_FILENAME, REPORT_TEXT_FILENAME
from evaluation.evaluator import evaluate, ood_sweep
from evaluation.reports import degradation_summary, write_ood_summary, \
    write_report_flat, write_report_text
from interactions.data_functions.storage import read_prepared
from recsys_workspace.management.base import PipelineCommand
from recsys_workspace.utils.exceptions import ConfigError

logger = logging.getLogger(__name__)


class Command(PipelineCommand):
    help = ('Evaluate a checkpoint on test sets resampled to lower '
            'popular-item proportions')
    command_name = 'ood'

    def add_pipeline_arguments(self, parser):
        parser.add_argument('--checkpoint', help='Checkpoint file')
        parser.add_argument('--data', help='Prepared data directory')
        parser.add_argument('--proportions',
                            help='Comma-separated popular proportions')
        parser.add_argument('--ood-seeds', dest='ood_seeds',
                            help='Comma-separated resampling seeds')
        parser.add_argument('--top-k', type=int, dest='top_k')

    def check_config(self, config):
        if not config.checkpoint or not config.data:
            raise ConfigError("ood needs --checkpoint and --data")
        if not config.proportions:
            raise ConfigError("ood needs at least one proportion")
        if not config.ood_seeds:
            raise ConfigError("ood needs at least one seed")

    def run(self, config, run_dir, run):
        checkpoint = load_checkpoint(config.checkpoint)
        split_data, stats = read_prepared(config.data)
        embeddings = checkpoint.forward(split_data.train)
        base = evaluate(embeddings, split_data.test, stats, config.top_k,
                        exclude=split_data.train, threads=config.threads)
        base.label = 'base'
        reports = ood_sweep(embeddings, split_data, stats,
                            config.proportions, config.ood_seeds,
                            config.top_k, config.threads, base=base)

        rows = base.rows()
        for report in [base] + reports:
            report.config_hash = run.config_hash
            write_report_text(report, os.path.join(
                run_dir, f"{report.label}.{REPORT_TEXT_FILENAME}"))
        for report in reports:
            rows += report.rows()
        write_report_flat(rows, os.path.join(run_dir, REPORT_FLAT_FILENAME))
        summary = degradation_summary(base, reports)
        write_ood_summary(summary, os.path.join(run_dir,
                                                OOD_SUMMARY_FILENAME))
        self.stdout.write(summary.to_string(index=False))
        return rows
