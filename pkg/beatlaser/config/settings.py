"""
Numerical tolerances and run defaults for beatlaser.

All rates are expressed in units of the atomic dephasing rate gamma unless a
``units`` block in the run configuration says otherwise.
"""

# Analytic kernels
# Below this |epsilon * t| the sinh(eps t)/eps factor uses its Taylor series.
SERIES_THRESHOLD: float = 1e-6
# Below this |2 epsilon| * horizon the noise integrals use their series form.
NOISE_SERIES_THRESHOLD: float = 1e-3
# Horizon (in units of 1/(2 lambda)) after which exponentials count as decayed.
DECAY_HORIZON: float = 40.0

# Moment integration
DEFAULT_DT: float = 0.01
STEADY_RESIDUAL_TOL: float = 1e-12
OVERFLOW_LIMIT: float = 1e150

# Fock oracle
DEFAULT_BOUNDARY_TOL: float = 1e-3
HERMITICITY_TOL: float = 1e-10
POSITIVITY_WARN_FLOOR: float = -1e-6
FOCK_DT_SCALE: float = 0.01
ORACLE_ABS_TOL: float = 1e-3
ORACLE_BOUNDARY_FACTOR: float = 10.0

# Monte Carlo
MC_BLOCK_SIZE: int = 1000
MIN_TRAJECTORIES: int = 100
MAX_WORKERS: int = 8

# Quantifiers
PHYSICALITY_TOL: float = 1e-6
MIN_INTENSITY: float = 1e-12
COMPENSATION_RTOL: float = 1e-12

# Output
FLOAT_FORMAT: str = "%.12g"
LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Exit codes
EXIT_OK: int = 0
EXIT_CONFIG: int = 1
EXIT_NUMERICAL: int = 2
EXIT_INTERNAL: int = 3
