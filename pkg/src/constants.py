"""Constants and defaults for the heat-flux BVP solver."""

# --- Version ---
VERSION = "0.4.1"

# --- Solver defaults ---
ABS_TOL = 1e-10
REL_TOL = 1e-10
T_MAX = 200.0
BLOWUP_THRESHOLD = 1e8
ZERO_EPS = 1e-6
EVENT_TOL = 1e-12
BISECT_TOL = 1e-10
MAX_BISECT_ITERS = 100
MAX_STEPS = 2_000_000
MAX_DOUBLINGS = 60
MAX_RETRIES = 3
SWEEP_POINTS = 16

# Step controller (elementary proportional control)
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0

# Automatic first steps are at least this fraction of the initial-layer time
INITIAL_STEP_FRACTION = 1e-4

# Plateau test: relative change of f over the last decade of time
PLATEAU_RTOL = 1e-3

# Exponential tail window, in units of f'
TAIL_WINDOW_LO = 1e-6
TAIL_WINDOW_HI = 1e-3

# Subquadraticity sample grid: magnitudes 1e-6 .. 1e3, both signs
SUBQUADRATIC_GRID_DECADES = (-6.0, 3.0)
SUBQUADRATIC_GRID_POINTS = 512

# Number of evaluation times for identity / equation residuals
RESIDUAL_POINTS = 64

# Dense sub-samples per accepted step for quadrature and tail fits
DENSE_PER_STEP = 8

# --- CLI ---
ENV_PREFIX = "HFBVP_"
CSV_PRECISION = ".17g"

# Exit codes
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_UNDERFLOW = 3
EXIT_BRACKET = 4
EXIT_INCONSISTENT = 5

# Debug level system (0-6)
# 0 = No debugging
# 2 = Run-level events (bracket found, bisection finished)
# 3 = Per-integration summaries (termination cause, step counts)
# 5 = Per-probe detail (every bisection midpoint)
# 6 = Everything including step rejections
DEBUG_LEVEL = 0
