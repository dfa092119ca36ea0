"""Service functions for the closed-form propagators and noise integrals.

This is an independent route to the same observables as the moment ODEs.
With sh(t) = sinh(epsilon t) / epsilon the propagators read

    F_pm(t) = exp(-lambda t) [cosh(epsilon t) +/- delta sh(t)]
    G_pm(t) = -b_pm exp(-lambda t) sh(t)

where delta = p epsilon and b_pm = q_pm epsilon, so they stay finite as
epsilon -> 0 and continue to cos/sin when epsilon is imaginary. Second
moments combine these propagators with the delta-correlated noise strengths;
the time integrals are sums of exponentials in 2 lambda and 2 lambda +/-
2 epsilon, evaluated in closed form.
"""

import cmath
import logging
import math

from scipy.special import gammainc

from beatlaser.config.settings import (
    DECAY_HORIZON,
    NOISE_SERIES_THRESHOLD,
    SERIES_THRESHOLD,
)
from beatlaser.schemas.schema_analytic import PropagatorKernels
from beatlaser.schemas.schema_moments import FirstMoments, SecondMoments
from beatlaser.schemas.schema_params import DerivedCoeffs
from beatlaser.services.service_coeffs import noise_diffusion, threshold_margin
from beatlaser.utils.errors import ConfigurationError, UnstableError

logger = logging.getLogger(__name__)


def _decay_pair(coeffs: DerivedCoeffs, t: float) -> tuple[complex, complex]:
    """Return (exp(-lambda t) cosh(eps t), exp(-lambda t) sinh(eps t) / eps)."""
    lam, eps = coeffs.lambda_, coeffs.epsilon
    if abs(eps * t) < SERIES_THRESHOLD:
        decay = cmath.exp(-lam * t)
        return decay, decay * t * (1.0 + (eps * t) ** 2 / 6.0)
    slow = cmath.exp((-lam + eps) * t)
    fast = cmath.exp((-lam - eps) * t)
    return 0.5 * (slow + fast), (slow - fast) / (2.0 * eps)


def kernels(coeffs: DerivedCoeffs, t: float) -> PropagatorKernels:
    """Evaluate F_plus, F_minus, G_plus, G_minus at time t.

    Args:
        coeffs: Derived coefficients (averaged mode; fixed mode is advisory)
        t: Time, >= 0; ``math.inf`` is accepted below threshold

    Returns:
        PropagatorKernels at t. F_pm(0) = 1 and G_pm(0) = 0.

    Raises:
        ValueError: If t is negative
        UnstableError: If t is infinite and the margin is not positive
    """
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if not coeffs.averaged:
        logger.warning("Analytic kernels in fixed phase mode are extrapolated")
    if math.isinf(t):
        if threshold_margin(coeffs) <= 0.0:
            raise UnstableError("Kernels do not decay at or above threshold")
        return PropagatorKernels(t=t, F_plus=0j, F_minus=0j, G_plus=0j, G_minus=0j)

    cosh_part, sinh_part = _decay_pair(coeffs, t)
    return PropagatorKernels(
        t=t,
        F_plus=cosh_part + coeffs.delta * sinh_part,
        F_minus=cosh_part - coeffs.delta * sinh_part,
        G_plus=-coeffs.b_plus * sinh_part,
        G_minus=-coeffs.b_minus * sinh_part,
    )


def mean_field(coeffs: DerivedCoeffs, first0: FirstMoments, t: float) -> FirstMoments:
    """Mean amplitudes at time t; the noise forces average to zero."""
    k = kernels(coeffs, t)
    return FirstMoments(
        mean_a=k.F_plus * first0.mean_a + k.G_plus * first0.mean_b.conjugate(),
        mean_b=k.F_minus * first0.mean_b + k.G_minus * first0.mean_a.conjugate(),
    )


def _exp_integral(rate: complex, t: float) -> complex:
    """Integral of exp(-rate s) over [0, t]."""
    if math.isinf(t):
        return 1.0 / rate
    x = rate * t
    if abs(x) < 1e-3:
        return t * (1.0 - x / 2.0 + x**2 / 6.0 - x**3 / 24.0 + x**4 / 120.0)
    return (1.0 - cmath.exp(-x)) / rate


def _power_moment(n: int, rate: float, t: float) -> float:
    """Integral of s**n exp(-rate s) over [0, t]."""
    if math.isinf(t):
        return math.factorial(n) / rate ** (n + 1)
    x = rate * t
    if abs(x) < 1.0:
        return t ** (n + 1) * sum(
            (-x) ** j / (math.factorial(j) * (n + j + 1)) for j in range(25)
        )
    if x > 0.0:
        return math.factorial(n) / rate ** (n + 1) * float(gammainc(n + 1, x))
    partial = sum(x**j / math.factorial(j) for j in range(n + 1))
    return math.factorial(n) / rate ** (n + 1) * (1.0 - math.exp(-x) * partial)


def noise_integrals(coeffs: DerivedCoeffs, t: float) -> tuple[complex, complex, complex]:
    """Integrals of the squared kernel shapes weighted by exp(-2 lambda s).

    Returns:
        Tuple (I_cc, I_cs, I_ss) of the integrals over [0, t] of
        exp(-2 lambda s) times cosh^2, cosh * sh and sh^2 respectively
    """
    k = 2.0 * coeffs.lambda_.real
    w = 2.0 * coeffs.epsilon
    horizon = min(t, DECAY_HORIZON / k) if k > 0.0 else t

    J0 = _exp_integral(k, t)
    if abs(w) * horizon < NOISE_SERIES_THRESHOLD:
        w2 = w * w
        Js = _power_moment(1, k, t) + w2 / 6.0 * _power_moment(3, k, t)
        Jq = _power_moment(2, k, t) + w2 / 12.0 * _power_moment(4, k, t)
        Jc = J0 + 0.5 * w2 * Jq
    else:
        slow = _exp_integral(k - w, t)
        fast = _exp_integral(k + w, t)
        Jc = 0.5 * (slow + fast)
        Js = (slow - fast) / (2.0 * w)
        Jq = 2.0 * (Jc - J0) / (w * w)
    return 0.5 * (J0 + Jc), Js, Jq


def second_moments_closed(
    coeffs: DerivedCoeffs, second0: SecondMoments, t: float
) -> SecondMoments:
    """Second moments at time t from the propagators and noise integrals.

    Args:
        coeffs: Derived coefficients in averaged phase mode
        second0: Initial second moments
        t: Time, >= 0, or ``math.inf`` for the steady state

    Returns:
        SecondMoments at t

    Raises:
        ConfigurationError: In fixed phase mode
        UnstableError: If t is infinite and the margin is not positive
    """
    if not coeffs.averaged:
        raise ConfigurationError("Closed-form second moments need averaged phase mode")
    kern = kernels(coeffs, t)
    noise = noise_diffusion(coeffs)
    D_aa, D_ba = noise.D_aa, noise.D_ba
    b_p, b_m, delta = coeffs.b_plus, coeffs.b_minus, coeffs.delta

    if t == 0.0:
        I_cc = I_cs = I_ss = 0j
    else:
        I_cc, I_cs, I_ss = noise_integrals(coeffs, t)

    Fp, Fm, Gp, Gm = kern.F_plus, kern.F_minus, kern.G_plus, kern.G_minus
    n_a0, n_b0, m0 = second0.n_a, second0.n_b, second0.m

    n_a = (
        abs(Fp) ** 2 * n_a0
        + abs(Gp) ** 2 * n_b0
        + 2.0 * (Fp * Gp.conjugate() * m0).real
        + D_aa * (I_cc + 2.0 * delta * I_cs + delta**2 * I_ss)
        - 2.0 * D_ba * b_p * (I_cs + delta * I_ss)
    )
    n_b = (
        abs(Fm) ** 2 * n_b0
        + abs(Gm) ** 2 * n_a0
        + 2.0 * (Fm * Gm.conjugate() * m0).real
        - 2.0 * D_ba * b_m * (I_cs - delta * I_ss)
        + D_aa * b_m**2 * I_ss
    )
    m = (
        Fp * Fm * m0
        + Fp * Gm * n_a0
        + Gp * Fm * n_b0
        + Gp * Gm * m0.conjugate()
        + D_ba * (I_cc - delta**2 * I_ss)
        - D_aa * b_m * (I_cs + delta * I_ss)
        + D_ba * b_p * b_m * I_ss
    )
    return SecondMoments(n_a=float(n_a.real), n_b=float(n_b.real), m=complex(m))
