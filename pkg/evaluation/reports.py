"""Report files.

The text report is a ``key=value`` header followed by a blank line and a
tab-separated per-group table.  Within a group each test pair of user u
counts 1/|T_u|, where T_u is u's whole test set.  The flat file has one
``name<TAB>group<TAB>value`` line per metric, the same rows that are
stored as MetricRecords.
"""

import logging

import numpy as np
import pandas

from evaluation.evaluator import relative_degradation

logger = logging.getLogger(__name__)

GROUP_COLUMNS = ['group', 'hr', 'ndcg', 'items', 'pairs', 'weight']
# weight of one test pair in the per-group HR and NDCG
GROUP_PAIR_WEIGHT = '1/user_test_size'
OOD_COLUMNS = ['proportion', 'seeds', 'achieved_proportion', 'hr_mean',
               'hr_std', 'ndcg_mean', 'degradation_mean',
               'degradation_std']


def write_report_text(report, path):
    header = {
        'label': report.label or '',
        'k': report.k,
        'hr': repr(float(report.hr)),
        'ndcg': repr(float(report.ndcg)),
        # display scale of published tables
        'hr_x100': f"{100 * report.hr:.3f}",
        'ndcg_x100': f"{100 * report.ndcg:.3f}",
        'num_users_evaluated': report.num_users_evaluated,
        'skipped_users': report.skipped_users,
        'config_hash': report.config_hash or '',
        'seed': '' if report.seed is None else report.seed,
        'group_pair_weight': GROUP_PAIR_WEIGHT,
    }
    for key, value in sorted(report.extra.items()):
        header[key] = repr(float(value))
    frame = pandas.DataFrame(
        [(g.label, g.hr, g.ndcg, g.item_count, g.pair_count, g.weight)
         for g in report.per_group], columns=GROUP_COLUMNS)
    with open(path, 'w', encoding='utf-8') as f:
        for key, value in header.items():
            f.write(f"{key}={value}\n")
        f.write('\n')
        frame.to_csv(f, sep='\t', index=False, float_format='%.6f')
    logger.info(f"Wrote report to {path}")


def write_report_flat(rows, path):
    with open(path, 'w', encoding='utf-8') as f:
        for name, group, value in rows:
            f.write(f"{name}\t{group}\t{float(value)!r}\n")


def degradation_summary(base, reports):
    """Mean and spread over seeds of each proportion's OOD reports."""
    by_proportion = {}
    for report in reports:
        proportion = report.extra['target_proportion']
        by_proportion.setdefault(proportion, []).append(report)
    rows = []
    for proportion, group in by_proportion.items():
        hrs = np.array([r.hr for r in group])
        degradations = np.array([relative_degradation(base.hr, r.hr)
                                 for r in group])
        rows.append((
            proportion, len(group),
            float(np.mean([r.extra['achieved_proportion'] for r in group])),
            float(hrs.mean()), float(hrs.std()),
            float(np.mean([r.ndcg for r in group])),
            float(degradations.mean()), float(degradations.std())))
    return pandas.DataFrame(rows, columns=OOD_COLUMNS)


def write_ood_summary(summary, path):
    summary.to_csv(path, sep='\t', index=False, float_format='%.6f')
    logger.info(f"Wrote OOD summary to {path}")
