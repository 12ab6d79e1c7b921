# Kinetic integration
DEFAULT_ODE_DT = 0.01
DEFAULT_ODE_T_END = 200.0
ODE_CLIP_TOLERANCE = 1e-12

# Lyapunov descent check
LYAPUNOV_DESCENT_TOLERANCE = 1e-9

# Cubic roots
ROOT_TOLERANCE = 1e-8

# Wavenumber lattice used when nothing else is configured
DEFAULT_LATTICE_LX = 40.0
DEFAULT_LATTICE_LY = 40.0
DEFAULT_LATTICE_M_MAX = 50
DEFAULT_LATTICE_N_MAX = 50

# Threshold bisection
DEFAULT_THRESHOLD_LO = 0.1
DEFAULT_THRESHOLD_HI = 3.0
DEFAULT_THRESHOLD_TOL = 1e-4

# Simulation
DEFAULT_DT = 0.005
DEFAULT_STEPS = 40000
DEFAULT_PERTURB_AMPLITUDE = 0.05
DEFAULT_SEED = 20240101
DEFAULT_PICARD_TOL = 1e-10
DEFAULT_PICARD_MAX_ITERS = 50
DEFAULT_PROGRESS_EVERY = 1000
POSITIVITY_FLOOR = 1e-6
BLOW_UP_LIMIT = 1e6

# Pattern classification
DEFAULT_CLASSIFICATION_THRESHOLD = 0.01
SPOT_PROMINENCE = 0.5

# Sweeps
DEFAULT_SWEEP_WORKERS = 1
