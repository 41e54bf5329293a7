MF = 'mf'
LIGHTGCN = 'lightgcn'
BACKBONES = (MF, LIGHTGCN)

# Contrastive weighting: multiply the log-softmax term by the popularity
# weight, or add the weight's log as the printed formula does
WEIGHTED = 'weighted'
LITERAL = 'literal'
LOSS_MODES = (WEIGHTED, LITERAL)

INTEREST = 'interest'
CONFORMITY = 'conformity'

USER_INT = 'user_int'
USER_CONF = 'user_conf'
ITEM_INT = 'item_int'
ITEM_CONF = 'item_conf'
TABLES = (USER_INT, USER_CONF, ITEM_INT, ITEM_CONF)
CAUSE_TABLES = {
    INTEREST: (USER_INT, ITEM_INT),
    CONFORMITY: (USER_CONF, ITEM_CONF),
}

# Ablation labels, decided by which auxiliary weights are non-zero
VARIANT_DCCL = 'dccl'
VARIANT_WO_IPCL = 'wo_ipcl'
VARIANT_WO_CPCL = 'wo_cpcl'
VARIANT_BACKBONE = 'backbone'

# Loss counters
EMPTY_NEGATIVES = 'empty_negatives'
DEGENERATE_WEIGHT = 'degenerate_weight'

MAX_NEGATIVE_ATTEMPTS = 100

CHECKPOINT_MAGIC = b'DCCLCKPT'
CHECKPOINT_VERSION = 1

CHECKPOINT_FILENAME = 'checkpoint.bin'
LAST_CHECKPOINT_FILENAME = 'last.bin'
BEST_CHECKPOINT_FILENAME = 'best.bin'
TRAIN_LOG_FILENAME = 'train_log.tsv'
TRAIN_LOG_COLUMNS = ('epoch', 'main_loss', 'int_loss', 'conf_loss', 'total',
                     'val_HR@20', 'wall_seconds')
