"""Configuration for the half-plane analysis toolkit."""

import logging
import os
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        logger.warning("Ignoring %s=%r: expected a positive integer", name, raw)
        return default
    return value


# Worker threads for grid work (families, scans)
THREADS = _positive_int("APLINE_THREADS", os.cpu_count() or 1)
LOG_LEVEL = os.getenv("APLINE_LOG_LEVEL", "WARNING").upper()

# Certified sup norms on the line Re s = kappa
DEFAULT_WINDOW = float(os.getenv("APLINE_WINDOW", "200"))
DEFAULT_COARSE_STEP = 0.01
DEFAULT_SLACK = 1e-6
MAX_REFINEMENT_POINTS = 2_000_000
# Longest exact line period scanned for translation defects, in coarse grid points
MAX_PERIOD_POINTS = 100_000

# Translation sets
DEFAULT_SCAN_STEP = 0.01
# A family counts as jointly almost periodic at (eps, T_scan)
# when max_gap < T_scan * JOINT_AP_GAP_FRACTION
JOINT_AP_GAP_FRACTION = 0.25
ROUNDING_TOLERANCE = 1e-12
DEFECT_SLACK = 1e-6

# Schottky
OMISSION_TOLERANCE = 1e-12

# Bohr coefficients
DEFAULT_BOHR_SIGMA = 1.0
DEFAULT_BOHR_T = 2000.0
QUADRATURE_ORDER = 16
QUADRATURE_TOLERANCE = 1e-9
SPECTRUM_THRESHOLD_FACTOR = 10.0

# Abscissa L(lambda)
MIN_FREQUENCY_PREFIX = 16
ABSCISSA_CAP = 2.0

# Riesz means and Poisson smoothing
POISSON_HALF_WIDTH = 1e4
POISSON_BUDGET = 1e-6

# Composition symbols
BOUNDARY_PROBES = (1e-6,)
IMAGE_KAPPAS = (0.5, 1.0, 2.0)
RANGE_STEP = 1e-3
SELF_MAP_TOLERANCE = 1e-9
WITNESS_INDEX = 50
SUBLEVEL_SIGMA_MAX = 3.0
SUBLEVEL_T_WINDOW = 20.0
SUBLEVEL_STEP = 0.05
DEFAULT_DELTAS = (0.8, 0.4, 0.2, 0.1, 0.05)
DEFAULT_EPSILONS = (1.0, 0.5)
PAIR_SAMPLES = 1000

# Montel experiments
CLUSTER_FRACTION = 0.5
