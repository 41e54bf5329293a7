from datetime import datetime
import logging
import os

from django.core.management.base import BaseCommand, CommandError

from recsys_workspace.constants import CONFIG_FILENAME, RUN_DIR_TIME_FORMAT
from recsys_workspace.models import Run
from recsys_workspace.utils.config import CONFIG_KEYS, RunConfig
from recsys_workspace.utils.exceptions import ConfigError, PipelineError

logger = logging.getLogger(__name__)


def make_run_dir(out, config_hash, now=None):
    """Create ``<out>/<YYYYmmdd-HHMMSS>-<hash>``, adding a numeric suffix
    if a run with the same hash started in the same second.
    """
    now = now or datetime.now()
    base = os.path.join(out, f"{now.strftime(RUN_DIR_TIME_FORMAT)}-"
                             f"{config_hash}")
    path = base
    suffix = 1
    while os.path.exists(path):
        suffix += 1
        path = f"{base}-{suffix}"
    os.makedirs(path)
    return path


def parse_assignments(assignments):
    values = {}
    for assignment in assignments or []:
        key, sep, raw = assignment.partition('=')
        if not sep:
            raise ConfigError(f"Expected KEY=VALUE, got '{assignment}'")
        values[key.strip()] = raw
    return values


class PipelineCommand(BaseCommand):
    """Base for the pipeline commands.

    Subclasses declare their own options with ``dest`` equal to a
    configuration key and implement ``run(config, run_dir, run)``, which
    returns an iterable of (name, group, value) metric rows to record.
    """
    command_name = None
    requires_migrations_checks = True

    def add_arguments(self, parser):
        parser.add_argument('--config', metavar='PATH',
                            help='key=value configuration file')
        parser.add_argument('--seed', type=int, help='Random seed')
        parser.add_argument('--out', metavar='DIR',
                            help='Directory for run outputs')
        parser.add_argument('--set', action='append', metavar='KEY=VALUE',
                            dest='assignments',
                            help='Override any configuration key')
        self.add_pipeline_arguments(parser)

    def add_pipeline_arguments(self, parser):
        pass

    def overrides(self, options):
        values = parse_assignments(options.get('assignments'))
        for key in CONFIG_KEYS:
            if options.get(key) is not None:
                values[key] = options[key]
        return values

    def handle(self, *args, **options):
        try:
            config = RunConfig.resolve(options.get('config'),
                                       self.overrides(options))
            self.check_config(config)
        except PipelineError as e:
            logger.error(f"{self.command_name}: {e}")
            raise CommandError(f"{e.category}: {e}", returncode=e.exit_code)

        config_hash = config.config_hash()
        run_dir = make_run_dir(config.out, config_hash)
        config.write(os.path.join(run_dir, CONFIG_FILENAME))
        run = Run.objects.start_run(self.command_name, config_hash,
                                    config.seed, run_dir)
        logger.info(f"{self.command_name}: writing to {run_dir}")

        try:
            rows = self.run(config, run_dir, run)
        except PipelineError as e:
            logger.error(f"{self.command_name} failed: {e}")
            run.fail(str(e), e.category)
            raise CommandError(f"{e.category}: {e}", returncode=e.exit_code)
        except Exception as e:
            run.fail(str(e), 'internal')
            raise

        if rows:
            run.record_metrics(rows)
        run.succeed()
        self.stdout.write(self.style.SUCCESS(
            f"{self.command_name} finished: {run_dir}"))
        return None

    def check_config(self, config):
        """Reject configurations the command cannot run with."""

    def run(self, config, run_dir, run):
        raise NotImplementedError
