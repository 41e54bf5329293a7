DEFAULT_TOP_K = 20

# Popularity groups: quintiles of train count, Q1 least popular
NUM_POPULARITY_GROUPS = 5
GROUP_LABELS = tuple(f"Q{g + 1}" for g in range(NUM_POPULARITY_GROUPS))
ALL_GROUP = 'all'

# Users scored per matrix product during evaluation
EVAL_CHUNK_SIZE = 1024

REPORT_TEXT_FILENAME = 'report.txt'
REPORT_FLAT_FILENAME = 'metrics.tsv'
OOD_SUMMARY_FILENAME = 'ood_summary.tsv'
