# Configuration file for the neutral inclusions toolkit

# Discretization defaults
DEFAULT_NODES = 512
DEFAULT_MODES = 64
DEFAULT_TOL = 1e-8

# Minimum node count accepted by build_curve
MIN_NODES = 16

# Probe grid for injectivity checks is PROBE_FACTOR * n points
PROBE_FACTOR = 4

# |Phi'| below this on the probe grid counts as a critical point
DERIVATIVE_FLOOR = 1e-10

# Linear algebra
CONDITION_WARNING = 1e12
MEAN_ZERO_TOL = 1e-9

# Distance rules (multiples of node spacing)
EVAL_DISTANCE_FACTOR = 2.0  # times pi * perimeter / N
CROSS_SEPARATION_FACTOR = 5.0

# Newton coating search
NEWTON_MAX_ITER = 25
NEWTON_FD_STEP = 1e-5  # relative to r_e
NEWTON_MAX_HALVINGS = 10

# Bonding-profile refinement
REFINE_MAX_ITER = 20
REFINE_FD_STEP = 1e-6
REFINE_TOL = 1e-11

# Far-field diagnostics
NOISE_FLOOR = 1e-11
MIN_DIRECTIONS = 16
ATTAINMENT_TOL = 1e-6

# Ellipsoid root finding
INSIDE_CORE_TOL = 1e-12

# Grid sampling
MAX_GRID_RESOLUTION = 2048
CSV_HEADER = ["x", "y", "u", "pert", "mask"]
CSV_FLOAT_FORMAT = "{:.17g}"

# Environment variable names read by the entry points
ENV_LOG_LEVEL = "NEUTRAL_INCLUSIONS_LOG_LEVEL"
ENV_NODES = "NEUTRAL_INCLUSIONS_NODES"
ENV_MODES = "NEUTRAL_INCLUSIONS_MODES"
