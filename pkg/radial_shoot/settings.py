"""
Default settings for radial_shoot.

Every tunable the solver uses lives here as a module-level constant. Values
supplied in a run configuration (see ``radial_shoot.cli``) override these per run.
"""

# Integrator

REL_TOL = 1e-9
ABS_TOL = 1e-9
EPS_ZERO = 1e-10
EPS_DOUBLE = 1e-6
R_MAX = 200.0
K_CAP = 50

# Largest radius used for the series start near the singular point r = 0.
SERIES_R0_CAP = 1e-3

# Initial values within this relative distance of a finite gamma_star are
# integrated as their deviation from gamma_star.
TOP_ANCHOR_GAP = 1e-3

# Smallest absolute tolerance handed to the step controller.
ATOL_FLOOR = 1e-300

# ConvergedTo(l) must hold over this radial window.
CONVERGENCE_WINDOW = 5.0
CONVERGENCE_TOL = 1e-5

# Interior points probed per step when looking for sign changes.
EVENT_SUBSAMPLES = 4

# Gauss-Legendre nodes per step for the residual quadratures.
GAUSS_POINTS = 8


# Classifier

EPS_GAMMA = 1e-6
EPS_MARGIN = 1e-8


# Nonlinearity

LEVEL_TOL = 1e-12
LEVEL_MARGIN = 1e-6
HYPOTHESIS_SAMPLES = 4001
BETA_BAR_GRID = 64
FLOOR_HEADROOM = 1.1


# Search

SCAN_POINTS = 512
SCAN_POINTS_CAP = 2 ** 16
BISECT_TOL_FACTOR = 1e-11
BISECT_MAX_ITER = 200
NEAR_PROBES = 5
BOUND_STATE_U_TOL = 1e-5
BOUND_STATE_I_TOL = 1e-8
A2_ALPHA_CAP_FACTOR = 64.0
A2_SCAN_POINTS = 64

# Below a finite gamma_star the log-spaced half of a scan runs in gap
# coordinates down to GAP_FLOOR; elsewhere it stops ALPHA_FLOOR_ULPS float
# spacings short of the upper end.
GAP_FLOOR = 1e-250
ALPHA_FLOOR_ULPS = 100

# Worker processes for scans; 1 keeps everything in-process.
WORKERS = 1


# Output

FLOAT_DIGITS = 17
OUTPUT_DIR = "out"
OUTPUT_FORMAT = "json"


# Logging

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "radial_shoot": {
            "handlers": ["console"],
            "level": "WARNING",
        },
    },
}
