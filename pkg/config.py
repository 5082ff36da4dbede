"""
Configuration file for CausalLab.
Contains application settings and constants.
"""

import os
from pathlib import Path

# Application information
APP_NAME = "CausalLab"
APP_VERSION = "1.0.0"
APP_DESCRIPTION = "Causal geometry and duality verification laboratory"

# Numerical tolerances
NULL_TOLERANCE = 1e-12  # interval magnitude treated as lightlike
SURFACE_TOLERANCE = 1e-12  # absolute tolerance for surface membership
SPACELIKE_MARGIN = 1e-6  # |grad tau| <= 1 - margin on smooth surfaces

# Surface grids
DEFAULT_GRID_H = 0.05  # window units
DEFORMATION_REFINEMENT = 2  # construction grid spacing is h / refinement
MOLLIFIER_MIN_CELLS = 1  # kernel radius never drops below this many fine cells
MOLLIFIER_MAX_ATTEMPTS = 12
ACHRONALITY_EXHAUSTIVE_POINTS = 4000  # all grid pairs below this size
ACHRONALITY_STENCIL = 3  # neighbour radius (cells) checked on larger grids
ACHRONALITY_SAMPLED_PAIRS = 200000
SQUEEZE_BOUNDARY_SAMPLES = 64  # extra samples on each base sphere

# Sprinkling limits
MAX_EXPECTED_POINTS = 5000

# Region enumeration
EXHAUSTIVE_MAX_POINTS = 12
DEFAULT_SAMPLE_BUDGET = 1000
BUFFER_STEPS = 1  # hasse steps standing in for "closure inside open set"

# Causal-curve sampling oracle
ORACLE_CURVES = 1000
ORACLE_SEGMENTS = 8
CONE_ORACLE_RESOLUTION = 9  # lattice points per axis inside a cone

# Logging settings
LOG_LEVEL = os.environ.get('CAUSAL_LAB_LOG_LEVEL', 'INFO')
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Scenario execution
DEFAULT_JOBS = 1
OUTPUT_DIR = Path(os.environ.get('CAUSAL_LAB_OUTPUT_DIR', 'reports'))
SCENARIO_DIR = Path(__file__).resolve().parent / 'scenarios'

# Exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
