"""
Django settings for the dccl project.

For more information on this file, see
https://docs.djangoproject.com/en/3.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/3.2/ref/settings/
"""

import logging
import os

from distutils.util import strtobool

# Stuff can happen from this point that is useful for deployer, need to get a
# logger now
logger = logging.getLogger(__name__)


def get_setting(setting, default=None, required=False):
    value = os.environ.get(setting, default)
    if required and not value:
        logger.info('Setting value for %s not found!', setting)
    return value


NAME = 'DCCL disentangled causal embeddings'

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

DEBUG = bool(strtobool(get_setting('DEBUG', 'False')))

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'recsys_workspace',
    'interactions',
    'causal_embedding',
    'evaluation',
    'synthetic',
]

MIDDLEWARE = []

# Database
# https://docs.djangoproject.com/en/3.2/ref/settings/#databases
# Only the run registry lives here; sqlite is plenty.
DATABASES = {
    'default': {
        'ENGINE': get_setting('DB_ENGINE', 'django.db.backends.sqlite3'),
        'NAME': get_setting('DB_NAME', os.path.join(BASE_DIR, 'db.sqlite3')),
        'USER': get_setting('DB_USER'),
        'PASSWORD': get_setting('DB_PASSWORD'),
        'HOST': get_setting('DB_HOST'),
        'PORT': get_setting('DB_PORT'),
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_L10N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

SECRET_KEY = get_setting('SECRET_KEY', 'secret')

# See:
# https://docs.djangoproject.com/en/3.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'console': {
            'format': '[%(asctime)s] [%(levelname)s] %(message)s',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'console'
        },
    },
    'loggers': {
        '': {
            'handlers': ['console'],
            'level': 'INFO',
        },
        'recsys_workspace': {
            'handlers': ['console'],
            'level': get_setting('DCCL_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'interactions': {
            'handlers': ['console'],
            'level': get_setting('DCCL_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'causal_embedding': {
            'handlers': ['console'],
            'level': get_setting('DCCL_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'evaluation': {
            'handlers': ['console'],
            'level': get_setting('DCCL_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'synthetic': {
            'handlers': ['console'],
            'level': get_setting('DCCL_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    }
}

# Where run directories are created when --out is not given
DCCL_OUTPUT_DIR = get_setting('DCCL_OUTPUT_DIR', os.path.join(BASE_DIR, 'runs'))

# Caps BLAS threads (exported by manage.py) and evaluation workers
DCCL_THREADS = int(get_setting('DCCL_THREADS', '1'))

DCCL_SEED = int(get_setting('DCCL_SEED', '2022'))

# Preprocessing.  10-core filtering and a per-user 20% holdout.
DCCL_FORMAT = get_setting('DCCL_FORMAT', 'csv')
DCCL_K_CORE = int(get_setting('DCCL_K_CORE', '10'))
DCCL_TEST_FRACTION = float(get_setting('DCCL_TEST_FRACTION', '0.2'))

# Model and training.  d=64, B=512, lr=0.001, alpha=beta=0.1
DCCL_EMBEDDING_DIM = int(get_setting('DCCL_EMBEDDING_DIM', '64'))
DCCL_INIT_SCALE = float(get_setting('DCCL_INIT_SCALE', '0.1'))
DCCL_BATCH_SIZE = int(get_setting('DCCL_BATCH_SIZE', '512'))
DCCL_LEARNING_RATE = float(get_setting('DCCL_LEARNING_RATE', '0.001'))
DCCL_ALPHA = float(get_setting('DCCL_ALPHA', '0.1'))
DCCL_BETA = float(get_setting('DCCL_BETA', '0.1'))
DCCL_EPOCHS = int(get_setting('DCCL_EPOCHS', '100'))
DCCL_BACKBONE = get_setting('DCCL_BACKBONE', 'mf')
DCCL_LAYERS = int(get_setting('DCCL_LAYERS', '2'))
DCCL_LOSS_MODE = get_setting('DCCL_LOSS_MODE', 'weighted')
DCCL_FALSE_NEGATIVE_FILTER = bool(strtobool(
    get_setting('DCCL_FALSE_NEGATIVE_FILTER', 'True')))
DCCL_VALIDATION_FRACTION = float(
    get_setting('DCCL_VALIDATION_FRACTION', '0.1'))
DCCL_PATIENCE = int(get_setting('DCCL_PATIENCE', '10'))

# Sparse Adam
DCCL_ADAM_BETA1 = float(get_setting('DCCL_ADAM_BETA1', '0.9'))
DCCL_ADAM_BETA2 = float(get_setting('DCCL_ADAM_BETA2', '0.999'))
DCCL_ADAM_EPS = float(get_setting('DCCL_ADAM_EPS', '1e-8'))

# Evaluation
DCCL_TOP_K = int(get_setting('DCCL_TOP_K', '20'))
DCCL_PROPORTIONS = get_setting('DCCL_PROPORTIONS', '0.5,0.4,0.3')
DCCL_OOD_SEEDS = get_setting('DCCL_OOD_SEEDS', '1,2,3')

# Synthetic world generator
DCCL_SYNTH_USERS = int(get_setting('DCCL_SYNTH_USERS', '2000'))
DCCL_SYNTH_ITEMS = int(get_setting('DCCL_SYNTH_ITEMS', '1000'))
DCCL_SYNTH_DIM = int(get_setting('DCCL_SYNTH_DIM', '16'))
DCCL_SYNTH_DENSITY = float(get_setting('DCCL_SYNTH_DENSITY', '0.005'))
DCCL_SYNTH_POP_EXPONENT = float(get_setting('DCCL_SYNTH_POP_EXPONENT', '1.5'))
DCCL_SYNTH_INTEREST_SCALE = float(
    get_setting('DCCL_SYNTH_INTEREST_SCALE', '4.0'))
# Blank solves the mix for DCCL_SYNTH_CONFORMITY_SHARE
DCCL_SYNTH_CONFORMITY_MIX = get_setting('DCCL_SYNTH_CONFORMITY_MIX', '')
DCCL_SYNTH_CONFORMITY_SHARE = float(
    get_setting('DCCL_SYNTH_CONFORMITY_SHARE', '0.4'))

try:
    from recsys_workspace.local_settings import *  # noqa
    logger.info('Imported local setting')
except ImportError:
    pass
