DEFAULT_USERS = 2000
DEFAULT_ITEMS = 1000
DEFAULT_DIM = 16
DEFAULT_DENSITY = 0.005
DEFAULT_POP_EXPONENT = 1.5
DEFAULT_INTEREST_SCALE = 4.0
# None solves the mix for DEFAULT_CONFORMITY_SHARE
DEFAULT_CONFORMITY_MIX = None
DEFAULT_CONFORMITY_SHARE = 0.4
DEFAULT_TEST_FRACTION = 0.2

# Search interval for the logit offset
OFFSET_BRACKET = (-60.0, 60.0)
# Search interval for the conformity mix b
MIX_BRACKET = (0.0, 40.0)
# Relative tolerance on the achieved expected density
DENSITY_TOLERANCE = 1e-6

TEST_OOD_FILENAME = 'test_ood.txt'
TRUE_POP_FILENAME = 'true_pop.txt'
CONFORMITY_FILENAME = 'conformity.txt'
ORACLE_REPORT_FILENAME = 'oracle_report.txt'
