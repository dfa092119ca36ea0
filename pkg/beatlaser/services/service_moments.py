"""Service functions for the closed moment equations.

The first moments obey a 2x2 linear system on (<a>, conj(<b>)); the second
moments obey a real 4x4 affine system on (n_a, n_b, Re m, Im m). Both are
integrated with fixed-step RK4 and, independently, propagated exactly with a
matrix exponential.
"""

import logging
import math

import numpy as np
import pandas as pd
import scipy.linalg

from beatlaser.config.settings import OVERFLOW_LIMIT, STEADY_RESIDUAL_TOL
from beatlaser.schemas.schema_moments import FirstMoments, MomentState, SecondMoments
from beatlaser.schemas.schema_params import DerivedCoeffs
from beatlaser.services.service_coeffs import noise_diffusion, threshold_margin
from beatlaser.utils.errors import NonFiniteError, NumericalError, UnstableError
from beatlaser.utils.integrators import rk4_step, step_times

logger = logging.getLogger(__name__)


def drift_first(coeffs: DerivedCoeffs) -> np.ndarray:
    """Drift matrix of the first moments acting on (<a>, conj(<b>)).

    In averaged mode its eigenvalues are -lambda + epsilon and
    -lambda - epsilon.
    """
    return np.array(
        [
            [-coeffs.a_plus, -coeffs.b_plus],
            [-np.conj(coeffs.b_minus), -np.conj(coeffs.a_minus)],
        ],
        dtype=np.complex128,
    )


def drift_second(coeffs: DerivedCoeffs) -> tuple[np.ndarray, np.ndarray]:
    """Affine drift of the second moments.

    The state vector is (n_a, n_b, Re m, Im m). Writing sigma = a_plus +
    a_minus, the equations are

        dn_a/dt = -2 Re(a_plus) n_a - 2 Re(b_plus conj(m)) + D_aa
        dn_b/dt = -2 Re(a_minus) n_b - 2 Re(b_minus conj(m))
        dm/dt   = -sigma m - b_minus n_a - b_plus n_b + D_ba

    which is real-linear in both phase modes.

    Returns:
        Tuple (M2, s) with M2 a real 4x4 matrix and s the real source vector
    """
    noise = noise_diffusion(coeffs)
    a_p, a_m = coeffs.a_plus, coeffs.a_minus
    b_p, b_m = coeffs.b_plus, coeffs.b_minus
    sigma = a_p + a_m

    M2 = np.array(
        [
            [-2.0 * a_p.real, 0.0, -2.0 * b_p.real, -2.0 * b_p.imag],
            [0.0, -2.0 * a_m.real, -2.0 * b_m.real, -2.0 * b_m.imag],
            [-b_m.real, -b_p.real, -sigma.real, sigma.imag],
            [-b_m.imag, -b_p.imag, -sigma.imag, -sigma.real],
        ],
        dtype=np.float64,
    )
    s = np.array(
        [noise.D_aa.real, 0.0, noise.D_ba.real, noise.D_ba.imag], dtype=np.float64
    )
    return M2, s


def _pack(state: MomentState) -> tuple[np.ndarray, np.ndarray]:
    first = np.array(
        [state.first.mean_a, np.conj(state.first.mean_b)], dtype=np.complex128
    )
    second = np.array(
        [state.second.n_a, state.second.n_b, state.second.m.real, state.second.m.imag],
        dtype=np.float64,
    )
    return first, second


def _unpack(t: float, first: np.ndarray, second: np.ndarray) -> MomentState:
    return MomentState(
        t=t,
        first=FirstMoments(mean_a=complex(first[0]), mean_b=complex(np.conj(first[1]))),
        second=SecondMoments(
            n_a=float(second[0]),
            n_b=float(second[1]),
            m=complex(second[2], second[3]),
        ),
    )


def _check_finite(t: float, *arrays: np.ndarray) -> None:
    for arr in arrays:
        if not np.all(np.isfinite(arr)) or np.max(np.abs(arr)) > OVERFLOW_LIMIT:
            raise NonFiniteError(f"Moment state overflowed at t={t:.6g}")


def integrate(
    coeffs: DerivedCoeffs, state0: MomentState, t_final: float, dt: float
) -> list[MomentState]:
    """Integrate both moment systems with fixed-step RK4.

    Args:
        coeffs: Derived coefficients
        state0: Initial moments; its time is taken as the origin
        t_final: Duration of the run (>= 0)
        dt: Step size (> 0)

    Returns:
        States at 0, dt, 2 dt, ..., with the last one at exactly t_final
        (offset by ``state0.t``)

    Raises:
        ValueError: If dt <= 0 or t_final < 0
        NonFiniteError: If the state overflows, typically above threshold
    """
    if dt <= 0.0 or t_final < 0.0:
        raise ValueError(f"Need dt > 0 and t_final >= 0, got dt={dt}, t_final={t_final}")

    M1 = drift_first(coeffs)
    M2, s = drift_second(coeffs)
    first, second = _pack(state0)
    times = step_times(t_final, dt)

    states = [state0]
    for k in range(1, len(times)):
        h = times[k] - times[k - 1]
        first = rk4_step(lambda y: M1 @ y, first, h)
        second = rk4_step(lambda u: M2 @ u + s, second, h)
        t = state0.t + float(times[k])
        _check_finite(t, first, second)
        states.append(_unpack(t, first, second))
    return states


def propagate_exact(
    coeffs: DerivedCoeffs, state0: MomentState, t: float
) -> MomentState:
    """Propagate moments by matrix exponentials.

    The affine second-moment system is exponentiated through the augmented
    matrix [[M2, s], [0, 0]] acting on (u, 1).
    """
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    M1 = drift_first(coeffs)
    M2, s = drift_second(coeffs)
    first, second = _pack(state0)

    augmented = np.zeros((5, 5), dtype=np.float64)
    augmented[:4, :4] = M2
    augmented[:4, 4] = s
    second_t = (scipy.linalg.expm(augmented * t) @ np.append(second, 1.0))[:4]
    first_t = scipy.linalg.expm(M1 * t) @ first
    _check_finite(state0.t + t, first_t, second_t)
    return _unpack(state0.t + t, first_t, second_t)


def steady_state(coeffs: DerivedCoeffs) -> SecondMoments:
    """Stationary second moments, the solution of M2 u + s = 0.

    Raises:
        UnstableError: If the threshold margin is not positive or M2 has an
            eigenvalue with nonnegative real part
        NumericalError: If the linear solve leaves a residual above tolerance

    Example:
        >>> steady_state(p1_coeffs).n_b  # doctest: +SKIP
        0.181818...
    """
    margin = threshold_margin(coeffs)
    if not margin > 0.0:
        raise UnstableError(f"No steady state: threshold margin {margin:.6g} <= 0")

    M2, s = drift_second(coeffs)
    slowest = float(np.max(scipy.linalg.eigvals(M2).real))
    if slowest >= 0.0:
        raise UnstableError(
            f"No steady state: second-moment eigenvalue with real part {slowest:.6g}"
        )

    try:
        u = scipy.linalg.solve(M2, -s)
    except scipy.linalg.LinAlgError as e:
        raise NumericalError(f"Steady-state solve failed: {e}") from e

    residual = float(np.linalg.norm(M2 @ u + s))
    scale = float(np.linalg.norm(s) + np.linalg.norm(M2) * np.linalg.norm(u))
    if residual > STEADY_RESIDUAL_TOL * max(scale, math.ulp(1.0)):
        raise NumericalError(f"Steady-state residual {residual:.3g} above tolerance")

    logger.debug("Steady state n_a=%.6g n_b=%.6g (margin %.4g)", u[0], u[1], margin)
    return SecondMoments(n_a=float(u[0]), n_b=float(u[1]), m=complex(u[2], u[3]))


def trajectory_frame(states: list[MomentState]) -> pd.DataFrame:
    """Flatten a moment trajectory into a DataFrame, one row per time."""
    return pd.DataFrame(
        {
            "t": [s.t for s in states],
            "re_a": [s.first.mean_a.real for s in states],
            "im_a": [s.first.mean_a.imag for s in states],
            "re_b": [s.first.mean_b.real for s in states],
            "im_b": [s.first.mean_b.imag for s in states],
            "n_a": [s.second.n_a for s in states],
            "n_b": [s.second.n_b for s in states],
            "re_m": [s.second.m.real for s in states],
            "im_m": [s.second.m.imag for s in states],
        }
    )
