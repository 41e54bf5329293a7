import math

from django.test import TestCase

from recsys_workspace.constants import RUN_FAILED, RUN_RUNNING, \
    RUN_SUCCEEDED
from recsys_workspace.models import MetricRecord, Run
from recsys_workspace.tests.factories import MetricRecordFactory, RunFactory


class RunManagerTests(TestCase):

    def test_start_run(self):
        run = Run.objects.start_run('train', 'abc123abc123', 7, '/tmp/x')
        self.assertEqual(RUN_RUNNING, run.status)
        self.assertIsNone(run.finished)
        self.assertEqual(run, Run.objects.get_run_for_dir('/tmp/x'))

    def test_latest_for_hash(self):
        first = RunFactory(config_hash='aaaaaaaaaaaa', command='train')
        second = RunFactory(config_hash='aaaaaaaaaaaa', command='eval')
        RunFactory(config_hash='bbbbbbbbbbbb')
        latest = Run.objects.latest_for_hash('aaaaaaaaaaaa')
        self.assertIn(latest, (first, second))
        self.assertEqual(first, Run.objects.latest_for_hash(
            'aaaaaaaaaaaa', command='train'))
        self.assertIsNone(Run.objects.latest_for_hash('cccccccccccc'))

    def test_get_run_for_dir(self):
        self.assertIsNone(Run.objects.get_run_for_dir('/nowhere'))
        RunFactory(out_dir='/tmp/twice')
        RunFactory(out_dir='/tmp/twice')
        with self.assertRaises(Run.MultipleObjectsReturned):
            Run.objects.get_run_for_dir('/tmp/twice')


class RunTests(TestCase):

    def test_succeed(self):
        run = RunFactory(status=RUN_RUNNING)
        run.succeed()
        run.refresh_from_db()
        self.assertEqual(RUN_SUCCEEDED, run.status)
        self.assertIsNotNone(run.finished)

    def test_fail(self):
        run = RunFactory(status=RUN_RUNNING)
        run.fail("out of items", 'empty-dataset')
        run.refresh_from_db()
        self.assertEqual(RUN_FAILED, run.status)
        self.assertEqual('empty-dataset', run.error_category)
        self.assertEqual("out of items", run.error_message)

    def test_record_metrics(self):
        run = RunFactory()
        run.record_metrics([('HR@20', 'all', 0.25), ('HR@20', 'Q1', 0.125),
                            ('degradation', 'all', math.nan)])
        self.assertEqual(2, run.metrics.count())
        self.assertEqual(0.25, run.metric('HR@20'))
        self.assertEqual(0.125, run.metric('HR@20', 'Q1'))
        self.assertIsNone(run.metric('degradation'))

    def test_metrics_go_with_the_run(self):
        record = MetricRecordFactory()
        self.assertEqual(record.value, record.run.metric('HR@20'))
        record.run.delete()
        self.assertFalse(MetricRecord.objects.exists())
