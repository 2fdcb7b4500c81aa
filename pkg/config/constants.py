"""Application constants."""

# Greedy Approximation Algorithms
ALGO_WCGA = "wcga"
ALGO_WGAFR = "wgafr"
ALGO_WGA = "wga"
ALGO_WOGA = "woga"
ALGO_DGA = "dga"
ALGO_HYBRID = "hybrid"

# Convex Optimization Algorithms
ALGO_WCGA_CO = "wcga_co"
ALGO_WGAFR_CO = "wgafr_co"

APPROXIMATION_ALGORITHMS = [ALGO_WCGA, ALGO_WGAFR, ALGO_WGA, ALGO_WOGA, ALGO_DGA, ALGO_HYBRID]
OPTIMIZATION_ALGORITHMS = [ALGO_WCGA_CO, ALGO_WGAFR_CO]
ALL_ALGORITHMS = APPROXIMATION_ALGORITHMS + OPTIMIZATION_ALGORITHMS

# Atom Selection Scan Modes
SCAN_EXACT = "exact"
SCAN_FIRST_ACCEPTABLE = "first_acceptable"

# Trace Status
STATUS_RUNNING = "running"
STATUS_CONVERGED = "converged"
STATUS_MAX_ITER = "max_iter"
STATUS_STAGNATED = "stagnated"
STATUS_OPTIMUM = "optimum"

# Trace Phases
PHASE_WOGA = "woga"
PHASE_WGA = "wga"

# Covering Targets
TARGET_SPHERE = "unit_sphere"
TARGET_BALL = "unit_ball"
COVERING_TARGETS = [TARGET_SPHERE, TARGET_BALL]

# Beta Estimation Methods
BETA_BRUTEFORCE = "bruteforce_grid"
BETA_MULTISTART = "multistart_descent"
BETA_CANONICAL = "canonical_exact"

# Dictionary Recipes
RECIPE_CANONICAL = "canonical"
RECIPE_RANDOM_SPHERE = "random_sphere"
RECIPE_INCOHERENT = "incoherent"
RECIPE_EQUIANGULAR = "equiangular"
RECIPE_FILE = "file"
RECIPE_LASSO = "lasso"
DICTIONARY_RECIPES = [
    RECIPE_CANONICAL, RECIPE_RANDOM_SPHERE, RECIPE_INCOHERENT,
    RECIPE_EQUIANGULAR, RECIPE_FILE, RECIPE_LASSO
]

# Target Generators
TARGET_VECTOR = "vector"
TARGET_ATOM = "atom"
TARGET_A1 = "a1_combination"
TARGET_SPARSE = "sparse"
TARGET_LASSO = "lasso"
TARGET_KINDS = [TARGET_VECTOR, TARGET_ATOM, TARGET_A1, TARGET_SPARSE, TARGET_LASSO]

# Verification Suites
SUITE_WCGA_RATE = "T1_1"
SUITE_WGAFR_CO_RATE = "T1_2"
SUITE_BETA_SIZE_BOUND = "T2_4"
SUITE_WCGA_CO_RATE = "T3_1"
SUITE_BETA_CHARACTERIZATION = "T3_3"
SUITE_CANONICAL_GUARANTEE = "eq_2_6"
SUITE_INCOHERENT_LEBESGUE = "eq_2_8"
SUITE_COVERING_TO_BETA = "lemma_2_1"
SUITE_BETA_TO_COVERING = "lemma_2_2"
SUITE_EQUIVALENCE = "sec_3_1_equiv"
SUITE_BETA_CANONICAL = "beta_canonical"
SUITE_DGA = "dga"
SUITE_SELF_CHECKS = "self_checks"
SUITE_PROPERTY_A = "T2_2"
SUITE_INCOHERENT_GROWTH = "T2_3"
SUITE_HYBRID = "hybrid"

# Exit Codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2

# CSV Headers
TRACE_CSV_HEADER = ["iter", "selected_index", "residual_norm", "coeff_l1"]
DESCENT_CSV_HEADER = ["iter", "selected_index", "energy", "energy_gap"]

# Numeric Tolerances
NORM_TOL = 1e-12
DUAL_TOL = 1e-10
FD_STEP = 1e-5
FD_TOL = 1e-4
MONOTONE_SLACK = 1e-12
GUARANTEE_SLACK = 1e-9
SPAN_TOL = 1e-8
DGA_STAGNATION_DELTA = 1e-15
DGA_STAGNATION_WINDOW = 100
COVERING_BETA_CAP = 2 ** -0.5
MIN_FIT_POINTS = 8
SIGNIFICANT_DIGITS = 17
