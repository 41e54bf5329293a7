# Copy this file to make your own local_settings.py

### DJANGO Settings ###

DEBUG = False

# The run registry database.  The default is a sqlite file next to
# manage.py; point it somewhere shared if several machines record runs.
# DATABASES = {
#     'default': {
#         'ENGINE': 'django.db.backends.sqlite3',
#         'NAME': '/srv/dccl/runs.sqlite3',
#     }
# }

### Pipeline Settings ###

# Base directory for run outputs (one sub-directory per run)
# DCCL_OUTPUT_DIR = "/srv/dccl/runs"

# Cap on BLAS threads and evaluation workers
# DCCL_THREADS = 4

# Training defaults.  Everything here can also be given per run in a
# key=value config file or as command flags.
# DCCL_EMBEDDING_DIM = 64
# DCCL_BATCH_SIZE = 512
# DCCL_LEARNING_RATE = 0.001
# DCCL_ALPHA = 0.1
# DCCL_BETA = 0.1
# DCCL_EPOCHS = 100
# DCCL_BACKBONE = "mf"          # or "lightgcn"
# DCCL_LAYERS = 2
# DCCL_LOSS_MODE = "weighted"   # or "literal"

# OOD sweeps
# DCCL_PROPORTIONS = "0.5,0.4,0.3"
# DCCL_OOD_SEEDS = "1,2,3"
