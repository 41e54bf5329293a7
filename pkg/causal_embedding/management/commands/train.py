import logging
import math

from causal_embedding.trainer import TrainConfig, train
from interactions.data_functions.storage import read_prepared
from recsys_workspace.management.base import PipelineCommand
from recsys_workspace.utils.exceptions import ConfigError

logger = logging.getLogger(__name__)


class Command(PipelineCommand):
    help = 'Train disentangled embeddings on a prepared data directory'
    command_name = 'train'

    def add_pipeline_arguments(self, parser):
        parser.add_argument('--data', help='Prepared data directory')
        parser.add_argument('--backbone', choices=['mf', 'lightgcn'])
        parser.add_argument('--layers', type=int)
        parser.add_argument('--embedding-dim', type=int,
                            dest='embedding_dim')
        parser.add_argument('--batch-size', type=int, dest='batch_size')
        parser.add_argument('--learning-rate', type=float,
                            dest='learning_rate')
        parser.add_argument('--alpha', type=float)
        parser.add_argument('--beta', type=float)
        parser.add_argument('--epochs', type=int)
        parser.add_argument('--loss-mode', choices=['weighted', 'literal'],
                            dest='loss_mode')
        parser.add_argument('--top-k', type=int, dest='top_k')

    def check_config(self, config):
        if not config.data:
            raise ConfigError("train needs --data")
        self.train_config = TrainConfig.from_run_config(config)

    def run(self, config, run_dir, run):
        split_data, stats = read_prepared(config.data)
        result = train(self.train_config, split_data, stats, run_dir)
        last = result.history[-1]
        rows = [('epochs', 'all', float(len(result.history))),
                ('best_epoch', 'all', float(result.best_epoch)),
                ('main_loss', 'all', last.main_loss),
                ('int_loss', 'all', last.int_loss),
                ('conf_loss', 'all', last.conf_loss),
                ('total_loss', 'all', last.total)]
        best = result.history[result.best_epoch - 1].val_hr
        if not math.isnan(best):
            rows.append((f"val_HR@{config.top_k}", 'all', best))
        rows += [(key, 'all', float(count))
                 for key, count in sorted(result.counts.items())]
        self.stdout.write(f"{self.train_config.variant}: checkpoint "
                          f"{result.checkpoint_path}")
        return rows
