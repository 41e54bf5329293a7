from interactions.constants import PUBLISHED_STATS


def dataset_summary(data):
    return {
        'users': data.num_users,
        'items': data.num_items,
        'pairs': len(data),
        'sparsity': data.sparsity(),
    }


def compare_published(summary, name):
    """Relative difference of users, items and sparsity from the
    published statistics of ``name``; None for an unknown name."""
    if name not in PUBLISHED_STATS:
        return None
    users, items, sparsity = PUBLISHED_STATS[name]
    return {
        'users': (summary['users'] - users) / users,
        'items': (summary['items'] - items) / items,
        'sparsity': (summary['sparsity'] - sparsity) / sparsity,
    }
