VERSION = "0.1.0"
VERBOSE_OUTPUT = False

# Decoder defaults (overridable in the settings file and on the command line)
DECODER_ALGORITHM = "sum-product"    # Options: "min-sum", "sum-product", "ml"
MAX_ITERATIONS = 50
EARLY_STOP = True
DAMPING = 1.0                        # 1.0 = no damping
LLR_CLIP = 50.0
COSET_REPLICAS = 3                   # nearest coset points per side in the sum-product LLR

# Monte Carlo stopping rule
MIN_WORD_ERRORS = 100
MAX_TRIALS = 10_000_000
BATCH_SIZE = 256                     # trials per work unit; fixed so output does not depend on worker count
WORKERS = 1
CONFIDENCE_LEVEL = 0.95

# Exhaustive-enumeration guards
MAX_MIN_DISTANCE_DIMENSION = 24
MAX_ORACLE_DIMENSION = 20
MAX_EXACT_LATTICE_DIMENSION = 64     # HNF / exact duality checks

# Code construction
PEG_MAX_ATTEMPTS = 20
DEFAULT_SYMBOL_DEGREE = 3            # 1-level default: (3,6)-regular rate-1/2 PEG code
DEFAULT_CHECK_DEGREE = 6

# LDLC verdict: average row degree of H must not exceed this
LDLC_MAX_AVERAGE_ROW_DEGREE = 16

# File formats
LATTICE_HEADER_TAG = "lattice"
VNR_FORMULA_VERSION = "vnr=det^(2/n)/(2*pi*e*sigma^2)"
RNG_DESCRIPTION = "numpy Generator(Philox(SeedSequence(master, spawn_key=(point, trial)))).standard_normal"

CSV_COLUMNS = (
    "vnr_db", "sigma", "trials", "word_errors", "symbol_errors",
    "wer", "ser", "nep", "mean_iters", "wer_lo95", "wer_hi95", "seed",
)

# Slow test tier switch (tests only)
SLOW_TESTS_ENV = "LATTICE_SLOW_TESTS"
# Rewrites the recorded sweep outputs under data/golden (tests only)
UPDATE_GOLDEN_ENV = "LATTICE_UPDATE_GOLDEN"
