from io import StringIO
import os

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from interactions.data_functions.storage import read_dataset, read_prepared
from interactions.management.commands.prepare import SUMMARY_FILENAME
from interactions.tests.common import FIXTURES_DIR, TempDirMixin
from recsys_workspace.constants import CONFIG_FILENAME, RUN_FAILED, \
    RUN_SUCCEEDED
from recsys_workspace.models import Run

FIXTURE = ['user,item,rating', 'u1,i1,5', 'u1,i2,3', 'u1,i3,1',
           'u2,i1,4', 'u2,i2,2']


class PrepareCommandTests(TempDirMixin, TestCase):

    def setUp(self, *args, **kwargs):
        super().setUp(*args, **kwargs)
        self.input = self.write_file('log.csv', FIXTURE)
        self.out = os.path.join(self.tmpdir, 'runs')

    def prepare(self, **options):
        call_command('prepare', input=self.input, out=self.out, seed=3,
                     stdout=StringIO(), **options)
        run = Run.objects.get(command='prepare')
        return run

    def test_passthrough(self):
        run = self.prepare(k_core=1, test_fraction=0.2)
        self.assertEqual(RUN_SUCCEEDED, run.status)
        data = read_dataset(os.path.join(run.out_dir, 'dataset.txt'))
        self.assertEqual(5, len(data))
        split_data, stats = read_prepared(run.out_dir)
        self.assertEqual(5, len(split_data.train) + len(split_data.test))
        self.assertEqual(1, len(split_data.test))
        self.assertEqual(4, int(stats.counts.sum()))
        self.assertTrue(os.path.isfile(
            os.path.join(run.out_dir, CONFIG_FILENAME)))
        self.assertEqual(5.0, run.metric('pairs'))
        self.assertEqual(2.0, run.metric('users'))

    def test_checked_in_log(self):
        # a 12x12 core missing its diagonal, plus a user and an item below
        # 10 pairs, plus a user that only falls below 10 once the item it
        # shares with the core is pruned; duplicate rows collapse
        self.input = os.path.join(FIXTURES_DIR, 'raw_log.csv')
        run = self.prepare(k_core=10, test_fraction=0.2)
        self.assertEqual(RUN_SUCCEEDED, run.status)
        self.assertEqual(12.0, run.metric('users'))
        self.assertEqual(12.0, run.metric('items'))
        self.assertEqual(132.0, run.metric('pairs'))
        self.assertAlmostEqual(132 / 144, run.metric('sparsity'))
        # round(0.2 * 11) = 2 held out per user
        self.assertEqual(24.0, run.metric('test_pairs'))
        self.assertEqual(108.0, run.metric('train_pairs'))

        split_data, _ = read_prepared(run.out_dir)
        self.assertEqual(108, len(split_data.train))
        self.assertEqual(24, len(split_data.test))
        self.assertTrue((split_data.test.user_degrees() == 2).all())
        with open(os.path.join(run.out_dir, SUMMARY_FILENAME),
                  encoding='utf-8') as f:
            summary = dict((name, float(value)) for name, _, value
                           in (line.split('\t') for line in f))
        self.assertEqual(132.0, summary['pairs'])
        self.assertEqual(24.0, summary['test_pairs'])

    def test_run_dir_named_by_hash(self):
        run = self.prepare(k_core=1)
        self.assertTrue(os.path.basename(run.out_dir)
                        .endswith('-' + run.config_hash))

    def test_everything_pruned(self):
        with self.assertRaises(CommandError) as cm:
            self.prepare(k_core=10)
        self.assertEqual(7, cm.exception.returncode)
        run = Run.objects.get(command='prepare')
        self.assertEqual(RUN_FAILED, run.status)
        self.assertEqual('empty-dataset', run.error_category)

    def test_missing_input(self):
        self.input = os.path.join(self.tmpdir, 'absent.csv')
        with self.assertRaises(CommandError) as cm:
            self.prepare(k_core=1)
        self.assertEqual(2, cm.exception.returncode)

    def test_input_required(self):
        with self.assertRaises(CommandError) as cm:
            call_command('prepare', out=self.out)
        self.assertEqual(3, cm.exception.returncode)
        self.assertFalse(Run.objects.exists())
