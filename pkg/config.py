"""
Configuration settings for the Gaussian squeezing-metrology toolkit
"""
import os

# File paths
DATA_DIR = 'data'
PROBE_DIR = os.path.join(DATA_DIR, 'probes')
PRIOR_DIR = os.path.join(DATA_DIR, 'priors')

APP_NAME = "gaussqfi"
APP_VERSION = "1.0"

# Matrix validation
SYMMETRY_TOL = 1e-8            # relative asymmetry repaired by symmetrization
PHYSICALITY_TOL = 1e-9
SYMPLECTIC_TOL = 1e-10
EIGENVALUE_PAIR_TOL = 1e-8

# QFI engine
PURE_STATE_TOL = 1e-6           # |M| - 1 below this triggers regularization
REGULARIZATION_STEPS = (1e-4, 5e-5)
RANK_GUARD_LOWER = 1e-9         # nu <= 1 + this counts as a pure mode
RANK_GUARD_UPPER = 1e-6         # (1 + lower, 1 + upper) is the rejected window
DEGENERATE_NU_TOL = 1e-6
NU_DERIVATIVE_TOL = 1e-6
FD_RELATIVE_STEP = 1e-4
QFI_NEGATIVE_TOL = 1e-9

# Derivative pipelines
ANALYTIC = 'analytic'
FINITE_DIFFERENCE = 'finite_difference'
DERIVATIVE_MODES = [ANALYTIC, FINITE_DIFFERENCE]
ENCODED_MODE = 0

# Encoding defaults
DEFAULT_EPSILON = 1.0
DEFAULT_THETA = 0.0
DEFAULT_ETA = 1.0

# Quadrature over the squeezing direction
DEFAULT_NODES = 256
MIN_NODES = 16
BAND_NODES = 512
NORMALIZATION_TOL = 1e-9

# Sampling
DEFAULT_SEED = 20240601
MAX_REJECTION_ATTEMPTS = 10**6
LOCAL_SQUEEZE_CAP = 1.0
LOCAL_DISPLACEMENT_CAP = 2.0

# Displacement-ratio optimizer
SCAN_POINTS = 33
RATIO_TOL = 1e-4
EXHAUSTIVE_NU_POINTS = 9

# Comparison modes
FIXED_NA = 'fixed_nA'
FIXED_N = 'fixed_N'
COMPARISON_MODES = [FIXED_NA, FIXED_N]

# Output
CSV_FLOAT_FORMAT = '%.11e'      # 12 significant digits
ORACLE_DEVIATION_LIMIT = 1e-5
FLAG_SEPARATOR = ';'
METADATA_SUFFIX = '.meta.json'

# Flags carried by results and sweep rows
FLAG_REGULARIZED = 'regularized'
FLAG_DEGENERATE = 'degenerate'
FLAG_CLAMPED = 'clamped'
FLAG_FULLY_LOSSY = 'fully_lossy'
FLAG_CLOSED_FORM = 'closed_form'
FLAG_EXHAUSTIVE = 'exhaustive'

# Table column contracts
SAMPLE_COLUMNS = ['index', 'n_A', 'nu', 'alpha', 'phi', 'xi_mag', 'psi',
                  'photon_number', 'eta', 'epsilon', 'avqfi']
SWEEP_COLUMNS = ['eta', 'epsilon', 'optimal_ratio', 'avqfi_single_opt',
                 'avqfi_tmsv', 'increase', 'flags', 'error']
BAND_COLUMNS = ['n_A', 'bound_max', 'bound_min', 'bound_coherent',
                'squeezed_min', 'squeezed_max', 'squeezed_mean',
                'tmsv_min', 'tmsv_max', 'tmsv_mean']
BUDGET_COLUMN = {FIXED_NA: 'n_A', FIXED_N: 'N'}
TEXT_COLUMNS = ['flags', 'error']

# Exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ERROR = 3
EXIT_ORACLE_WARNING = 4

# AvQFI methods
METHOD_CLOSED_FORM = 'closed_form'
METHOD_QUADRATURE = 'quadrature'

# Sampler kinds
KIND_PURE = 'pure'
KIND_MIXED = 'mixed'
SAMPLE_KINDS = [KIND_PURE, KIND_MIXED]

# Cross-checks
ORACLE_SAMPLE_ROWS = 8
VERIFY_CASES = 100
VERIFY_TWO_MODE_CASES = 4
VERIFY_NU_B = (1.5, 3.0, 10.0)
