RUN_RUNNING = 'running'
RUN_SUCCEEDED = 'succeeded'
RUN_FAILED = 'failed'

RUN_STATUS_CHOICES = (
    (RUN_RUNNING, 'Running'),
    (RUN_SUCCEEDED, 'Succeeded'),
    (RUN_FAILED, 'Failed'),
)

# Name of the resolved configuration written into every run directory
CONFIG_FILENAME = 'config.txt'

RUN_DIR_TIME_FORMAT = '%Y%m%d-%H%M%S'
