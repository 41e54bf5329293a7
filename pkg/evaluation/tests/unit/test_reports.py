import math
import os

import pandas

from django.test import SimpleTestCase

from evaluation.evaluator import GroupMetrics, MetricsReport
from evaluation.reports import GROUP_COLUMNS, degradation_summary, \
    write_report_flat, write_report_text
from interactions.tests.common import TempDirMixin


def make_report(hr, label=None, **extra):
    groups = [GroupMetrics(f"Q{g + 1}", hr, hr / 2, 4, 3, 0.5)
              for g in range(5)]
    return MetricsReport(20, hr, hr / 2, groups, 10, label=label,
                         extra=extra)


class ReportTextTests(TempDirMixin, SimpleTestCase):

    def test_layout(self):
        report = make_report(0.25, label='base')
        report.config_hash = 'abcdef012345'
        report.seed = 3
        path = os.path.join(self.tmpdir, 'report.txt')
        write_report_text(report, path)
        with open(path) as f:
            lines = f.read().splitlines()
        blank = lines.index('')
        header = dict(line.split('=', 1) for line in lines[:blank])
        self.assertEqual('base', header['label'])
        self.assertEqual(0.25, float(header['hr']))
        self.assertEqual('25.000', header['hr_x100'])
        self.assertEqual('12.500', header['ndcg_x100'])
        self.assertEqual('abcdef012345', header['config_hash'])
        self.assertEqual('3', header['seed'])
        self.assertEqual('1/user_test_size', header['group_pair_weight'])
        with open(path) as f:
            table = pandas.read_csv(f, sep='\t', skiprows=blank + 1)
        self.assertEqual(GROUP_COLUMNS, list(table.columns))
        self.assertEqual(['Q1', 'Q2', 'Q3', 'Q4', 'Q5'],
                         table['group'].tolist())

    def test_extra_keys_in_header(self):
        report = make_report(0.1, target_proportion=0.3)
        path = os.path.join(self.tmpdir, 'report.txt')
        write_report_text(report, path)
        with open(path) as f:
            self.assertIn('target_proportion=0.3\n', f.read())

    def test_flat(self):
        report = make_report(0.25, label='base')
        path = os.path.join(self.tmpdir, 'metrics.tsv')
        write_report_flat(report.rows(), path)
        with open(path) as f:
            first = f.readline()
        self.assertEqual('base.HR@20\tall\t0.25\n', first)


class DegradationSummaryTests(SimpleTestCase):

    def test_mean_over_seeds(self):
        base = make_report(0.4)
        reports = [make_report(hr, target_proportion=p,
                               achieved_proportion=p)
                   for p, hr in ((0.3, 0.2), (0.3, 0.3), (0.1, 0.1))]
        summary = degradation_summary(base, reports)
        self.assertEqual([0.3, 0.1], summary['proportion'].tolist())
        self.assertEqual([2, 1], summary['seeds'].tolist())
        first = summary.iloc[0]
        self.assertAlmostEqual(0.25, first['hr_mean'])
        self.assertAlmostEqual(0.05, first['hr_std'])
        self.assertAlmostEqual(0.375, first['degradation_mean'])
        self.assertAlmostEqual(0.75, summary.iloc[1]['degradation_mean'])

    def test_zero_base(self):
        summary = degradation_summary(
            make_report(0.0), [make_report(0.0, target_proportion=0.2,
                                           achieved_proportion=0.2)])
        self.assertTrue(math.isnan(summary.iloc[0]['degradation_mean']))
