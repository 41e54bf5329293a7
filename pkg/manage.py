#!/usr/bin/env python3
"""Django's command-line utility for administrative tasks."""
import os
import sys

THREAD_VARIABLES = ('OMP_NUM_THREADS', 'OPENBLAS_NUM_THREADS',
                    'MKL_NUM_THREADS')


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'recsys_workspace.settings')
    # BLAS reads these once, when numpy is first imported
    threads = os.environ.get('DCCL_THREADS')
    if threads:
        for name in THREAD_VARIABLES:
            os.environ.setdefault(name, threads)
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
