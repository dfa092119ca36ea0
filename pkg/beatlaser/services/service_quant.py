"""Service functions for nonclassicality quantifiers.

Moments are treated as those of a Gaussian two-mode state. Quadratures are
x = a + a^dagger and p = -i(a - a^dagger), so the vacuum covariance is the
identity.
"""

import logging
import math

import numpy as np

from beatlaser.config.settings import MIN_INTENSITY, PHYSICALITY_TOL
from beatlaser.schemas.schema_moments import FirstMoments, SecondMoments
from beatlaser.schemas.schema_quant import NonclassicalityReport
from beatlaser.utils.errors import DegenerateIntensityError, UnphysicalCovarianceError

logger = logging.getLogger(__name__)


def _central(
    second: SecondMoments, first: FirstMoments | None
) -> tuple[float, float, complex]:
    """Fluctuation moments with the mean field subtracted."""
    if first is None:
        return second.n_a, second.n_b, second.m
    return (
        second.n_a - abs(first.mean_a) ** 2,
        second.n_b - abs(first.mean_b) ** 2,
        second.m - first.mean_a * first.mean_b,
    )


def quadrature_variances(
    second: SecondMoments, first: FirstMoments | None = None
) -> tuple[float, float]:
    """Combined quadrature variances (var_minus, var_plus).

    var_-/+ = 1 + dn_a + dn_b -/+ 2 Re(dm); the vacuum gives (1, 1) and
    values below 1 indicate two-mode squeezing.
    """
    n_a, n_b, m = _central(second, first)
    var_minus = 1.0 + n_a + n_b - 2.0 * m.real
    var_plus = 1.0 + n_a + n_b + 2.0 * m.real
    if var_minus * var_plus < 1.0 - PHYSICALITY_TOL:
        logger.warning(
            "Quadrature uncertainty product %.6g below 1", var_minus * var_plus
        )
    return var_minus, var_plus


def dgcz_witness(second: SecondMoments, first: FirstMoments | None = None) -> float:
    """Inseparability witness S, minimized over local phase rotations.

    Separable states satisfy S >= 2; S < 2 certifies entanglement.
    """
    n_a, n_b, m = _central(second, first)
    return 2.0 * (1.0 + n_a + n_b - 2.0 * abs(m))


def covariance_matrix(
    second: SecondMoments, first: FirstMoments | None = None
) -> np.ndarray:
    """Symmetrized covariance matrix over (x_a, p_a, x_b, p_b)."""
    n_a, n_b, m = _central(second, first)
    V = np.zeros((4, 4), dtype=np.float64)
    V[0, 0] = V[1, 1] = 2.0 * n_a + 1.0
    V[2, 2] = V[3, 3] = 2.0 * n_b + 1.0
    C = np.array([[2.0 * m.real, 2.0 * m.imag], [2.0 * m.imag, -2.0 * m.real]])
    V[:2, 2:] = C
    V[2:, :2] = C.T
    return V


def _smallest_symplectic(V: np.ndarray, transpose: bool) -> float:
    det_a = np.linalg.det(V[:2, :2])
    det_b = np.linalg.det(V[2:, 2:])
    det_c = np.linalg.det(V[:2, 2:])
    invariant = det_a + det_b + (-2.0 if transpose else 2.0) * det_c
    discriminant = max(0.0, invariant**2 - 4.0 * np.linalg.det(V))
    return math.sqrt(max(0.0, (invariant - math.sqrt(discriminant)) / 2.0))


def log_negativity(second: SecondMoments, first: FirstMoments | None = None) -> float:
    """Logarithmic negativity E_N = max(0, -ln nu), natural logarithm.

    nu is the smallest symplectic eigenvalue of the partially transposed
    covariance matrix.

    Raises:
        UnphysicalCovarianceError: If the covariance matrix itself violates
            the uncertainty principle by more than 1e-6
    """
    V = covariance_matrix(second, first)
    nu_physical = _smallest_symplectic(V, transpose=False)
    if nu_physical < 1.0 - PHYSICALITY_TOL:
        raise UnphysicalCovarianceError(
            f"Smallest symplectic eigenvalue {nu_physical:.6g} < 1; moments are "
            "not those of a quantum state"
        )
    nu_tilde = _smallest_symplectic(V, transpose=True)
    if nu_tilde <= 0.0:
        raise UnphysicalCovarianceError("Partially transposed spectrum collapsed")
    return max(0.0, -math.log(nu_tilde))


def gaussian_g2(
    second: SecondMoments, first: FirstMoments | None = None
) -> tuple[float, float]:
    """Cross correlation g2_cross and Cauchy-Schwarz ratio.

    Uses the Gaussian factorization <a+ b+ b a> = n_a n_b + |m|^2, valid for
    zero means, with g2 = 2 for each single mode. cs_ratio > 1 violates the
    classical Cauchy-Schwarz inequality.

    Raises:
        DegenerateIntensityError: If n_a or n_b is below 1e-12
    """
    if first is not None and (first.mean_a != 0 or first.mean_b != 0):
        logger.debug("Gaussian g2 evaluated with nonzero mean field")
    if second.n_a < MIN_INTENSITY or second.n_b < MIN_INTENSITY:
        raise DegenerateIntensityError(
            f"Mode intensities too small for g2: n_a={second.n_a:.3g}, "
            f"n_b={second.n_b:.3g}"
        )
    g2_cross = 1.0 + abs(second.m) ** 2 / (second.n_a * second.n_b)
    return g2_cross, g2_cross**2 / 4.0


def nonclassicality_report(
    second: SecondMoments, first: FirstMoments | None = None
) -> NonclassicalityReport:
    """Every quantifier for one moment set; g2 fields are None for empty modes."""
    var_minus, var_plus = quadrature_variances(second, first)
    try:
        g2_cross, cs_ratio = gaussian_g2(second, first)
    except DegenerateIntensityError:
        g2_cross, cs_ratio = None, None
    return NonclassicalityReport(
        n_total=second.n_a + second.n_b,
        var_minus=var_minus,
        var_plus=var_plus,
        dgcz=dgcz_witness(second, first),
        log_neg=log_negativity(second, first),
        g2_cross=g2_cross,
        cs_ratio=cs_ratio,
    )
