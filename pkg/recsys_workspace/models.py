from datetime import datetime
import logging
import math

from django.db import models
from django.utils.timezone import utc

from recsys_workspace.constants import RUN_RUNNING, RUN_SUCCEEDED, \
    RUN_FAILED, RUN_STATUS_CHOICES

logger = logging.getLogger(__name__)


class RunManager(models.Manager):
    def start_run(self, command, config_hash, seed, out_dir):
        run = self.create(command=command, config_hash=config_hash,
                          seed=seed, out_dir=out_dir, status=RUN_RUNNING)
        logger.info(f"Started {run}")
        return run

    def latest_for_hash(self, config_hash, command=None):
        qs = self.filter(config_hash=config_hash)
        if command:
            qs = qs.filter(command=command)
        return qs.order_by('-started').first()

    def get_run_for_dir(self, out_dir):
        try:
            return self.get(out_dir=out_dir)
        except Run.DoesNotExist:
            return None
        except Run.MultipleObjectsReturned as e:
            logger.error(e)
            error = Run.MultipleObjectsReturned(
                f"Multiple runs recorded with out_dir={out_dir}")
            logger.error(error)
            raise error


class Run(models.Model):
    command = models.CharField(max_length=16)
    config_hash = models.CharField(max_length=12, db_index=True)
    seed = models.BigIntegerField()
    out_dir = models.CharField(max_length=512)
    status = models.CharField(max_length=16, choices=RUN_STATUS_CHOICES,
                              default=RUN_RUNNING)
    started = models.DateTimeField(auto_now_add=True)
    finished = models.DateTimeField(null=True, blank=True)
    error_category = models.CharField(max_length=32, null=True, blank=True)
    error_message = models.TextField(null=True, blank=True)

    objects = RunManager()

    def __str__(self):
        return (f"Run {self.pk} ({self.command}) hash={self.config_hash} "
                f"seed={self.seed}")

    def succeed(self):
        self.status = RUN_SUCCEEDED
        self.finished = datetime.now(utc)
        self.save()

    def fail(self, msg, category=None):
        self.status = RUN_FAILED
        self.finished = datetime.now(utc)
        self.error_category = category
        self.error_message = msg
        self.save()

    def record_metrics(self, rows):
        """Store (name, group, value) triples for this run.  NaN values
        are left out."""
        records = [MetricRecord(run=self, name=name, group=group,
                                value=float(value))
                   for name, group, value in rows if not math.isnan(value)]
        if len(records) < len(rows):
            logger.warning(f"{self}: not recording {len(rows) - len(records)}"
                           f" NaN metrics")
        MetricRecord.objects.bulk_create(records)

    def metric(self, name, group='all'):
        record = self.metrics.filter(name=name, group=group).first()
        return record.value if record else None


class MetricRecord(models.Model):
    run = models.ForeignKey(Run, on_delete=models.CASCADE,
                            related_name='metrics')
    name = models.CharField(max_length=64)
    group = models.CharField(max_length=64, default='all')
    value = models.FloatField()

    def __str__(self):
        return f"{self.name}[{self.group}]={self.value}"
