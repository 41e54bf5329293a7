CSV = 'csv'
TSV = 'tsv'
FORMAT_DELIMITERS = {
    CSV: ',',
    TSV: '\t',
}

DEFAULT_K_CORE = 10
DEFAULT_TEST_FRACTION = 0.2

# Items whose train count is strictly above this percentile are popular
POPULAR_PERCENTILE = 80

# Files of a prepared data directory
DATASET_FILENAME = 'dataset.txt'
TRAIN_FILENAME = 'train.txt'
TEST_FILENAME = 'test.txt'
POPULARITY_FILENAME = 'popularity.txt'
SPLIT_FILENAME = 'split.txt'
USERS_FILENAME = 'users.txt'
ITEMS_FILENAME = 'items.txt'

# Published 10-core statistics: (users, items, sparsity)
PUBLISHED_STATS = {
    'yelp': (27057, 17843, 1.007e-3),
    'short-video': (30957, 71006, 1.145e-3),
}
