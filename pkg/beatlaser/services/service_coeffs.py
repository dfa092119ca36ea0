"""Service functions for the coefficient algebra of the beat laser.

This module turns ``PhysicalParams`` into the derived scalars of the master
equation (A, B, C, D, E), the c-number Langevin drift (a, b), the analytic
propagator scalars (lambda, epsilon, Z, p, q) and the noise correlation
strengths. It also evaluates the threshold margin and the initial atomic
state.
"""

import logging
import math
from typing import Any, Literal

import numpy as np
from pydantic import ValidationError

from beatlaser.config.settings import COMPENSATION_RTOL
from beatlaser.schemas.schema_params import (
    DerivedCoeffs,
    FixedPhase,
    InitialPopulations,
    NoiseDiffusion,
    PhysicalParams,
)
from beatlaser.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


def build_params(data: dict[str, Any]) -> PhysicalParams:
    """Validate a raw parameter mapping into ``PhysicalParams``.

    Args:
        data: Mapping with keys g, r_a, gamma, Gamma, Omega, kappa, eta, phase

    Returns:
        Validated, immutable parameter set

    Raises:
        ConfigurationError: If any bound is violated; the message names the field

    Example:
        >>> params = build_params({"g": 0.2, "r_a": 10, "kappa": 0.2})
    """
    try:
        return PhysicalParams.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigurationError(f"Invalid physical parameters: {problems}") from e


def _ensure_valid(params: PhysicalParams) -> None:
    """Re-check the physical bounds on parameters that skipped validation."""
    for name in ("g", "r_a", "gamma", "Gamma", "kappa"):
        value = getattr(params, name)
        if not value > 0.0:
            raise ConfigurationError(f"{name} must be positive, got {value}")
    if not params.Omega >= 0.0:
        raise ConfigurationError(f"Omega must be nonnegative, got {params.Omega}")
    if not -1.0 <= params.eta <= 1.0:
        raise ConfigurationError(f"eta must lie in [-1, 1], got {params.eta}")
    if not params.averaged and not 0.0 <= params.phase.phi < 2.0 * math.pi:
        raise ConfigurationError(f"phi must lie in [0, 2pi), got {params.phase.phi}")
    if params.averaged and not params.phase.theta >= 0.0:
        raise ConfigurationError(
            f"theta must be nonnegative, got {params.phase.theta}"
        )


def coherence_factors(params: PhysicalParams) -> tuple[complex, complex]:
    """Return (Theta_p, Theta_m), the coherence factors of both phase signs.

    Theta_p carries exp(-i phi) and Theta_m carries exp(+i phi). Gaussian
    averaging maps both exponentials to exp(-theta).
    """
    root = math.sqrt(max(0.0, 1.0 - params.eta**2))
    if isinstance(params.phase, FixedPhase):
        phi = params.phase.phi
        return root * complex(math.cos(phi), -math.sin(phi)), root * complex(
            math.cos(phi), math.sin(phi)
        )
    factor = complex(root * math.exp(-params.phase.theta), 0.0)
    return factor, factor


def _principal_epsilon(eps2: complex, averaged: bool) -> complex:
    # Averaged mode keeps epsilon on the positive real or positive imaginary axis.
    if averaged:
        value = eps2.real
        return complex(math.sqrt(value), 0.0) if value >= 0.0 else complex(
            0.0, math.sqrt(-value)
        )
    return complex(np.sqrt(np.complex128(eps2)))


def derive_coeffs(params: PhysicalParams) -> DerivedCoeffs:
    """Compute every derived scalar of the model.

    In averaged mode the result follows the published derivation exactly. In
    fixed mode the same algebra is evaluated with complex coherence factors
    and the result is flagged ``extrapolated``.

    Args:
        params: Validated physical parameters

    Returns:
        DerivedCoeffs with master-equation, drift and propagator scalars.
        ``p`` and ``q_plus``/``q_minus`` are NaN when epsilon vanishes.

    Raises:
        ConfigurationError: If a rate is nonpositive or eta is out of range

    Example:
        >>> c = derive_coeffs(PhysicalParams(g=0.2, r_a=10, Omega=1, kappa=0.2))
        >>> round(c.lambda_.real, 6)
        0.22
    """
    _ensure_valid(params)

    zeta = params.Omega / params.gamma
    zetap = params.Omega / params.Gamma
    chi = params.gamma / params.Gamma
    A = 2.0 * params.r_a * params.g**2 / params.gamma**2
    B = (4.0 + zeta**2) * (1.0 + zetap * zeta)
    drive = zetap * (1.0 + zetap * zeta)
    theta_p, theta_m = coherence_factors(params)

    C_plus = 2.0 * zetap**2 + 2.0 * chi + params.eta * (zetap * zeta - 2.0 * chi)
    C_minus = 2.0 * zetap**2 + 2.0 * chi - params.eta * (zetap * zeta - 2.0 * chi)
    D_plus = (2.0 * zetap + zeta) * theta_m
    D_minus = (2.0 * zetap + zeta) * theta_p
    E_plus = 3.0 * params.eta * zetap - (2.0 - zetap * zeta) * theta_m
    E_minus = 3.0 * params.eta * zetap - (2.0 - zetap * zeta) * theta_p

    gain = A / (2.0 * B)
    a_plus = params.kappa / 2.0 + gain * (D_minus - C_plus)
    a_minus = params.kappa / 2.0 + gain * (C_minus + D_plus)
    b_plus = -gain * (drive + E_minus)
    b_minus = -gain * (drive - E_plus)

    lam = (a_plus + a_minus) / 2.0
    delta = (a_minus - a_plus) / 2.0
    epsilon = _principal_epsilon(delta**2 + b_plus * b_minus, params.averaged)
    Z = epsilon / gain

    if epsilon == 0.0:
        nan = complex(math.nan, math.nan)
        p, q_plus, q_minus = nan, nan, nan
    else:
        p, q_plus, q_minus = delta / epsilon, b_plus / epsilon, b_minus / epsilon

    if not params.averaged:
        logger.debug("Fixed phase: propagator scalars are extrapolated")

    return DerivedCoeffs(
        averaged=params.averaged,
        extrapolated=not params.averaged,
        kappa=params.kappa,
        zeta=zeta,
        zetap=zetap,
        chi=chi,
        A=A,
        B=B,
        drive=drive,
        Theta_p=theta_p,
        Theta_m=theta_m,
        C_plus=C_plus,
        C_minus=C_minus,
        D_plus=D_plus,
        D_minus=D_minus,
        E_plus=E_plus,
        E_minus=E_minus,
        a_plus=a_plus,
        a_minus=a_minus,
        b_plus=b_plus,
        b_minus=b_minus,
        lambda_=lam,
        delta=delta,
        Z=Z,
        epsilon=epsilon,
        p=p,
        q_plus=q_plus,
        q_minus=q_minus,
    )


def threshold_margin(coeffs: DerivedCoeffs) -> float:
    """Distance below threshold, lambda - epsilon.

    Returns lambda - Re(epsilon) when epsilon is real and lambda when it is
    purely imaginary. Positive values mean the first moments decay and a
    steady state exists.

    In fixed mode, where lambda and epsilon are only extrapolations, the margin
    is the slowest decay rate of the first-moment drift matrix instead.
    """
    if coeffs.averaged:
        return coeffs.lambda_.real - coeffs.epsilon.real
    drift = np.array(
        [
            [-coeffs.a_plus, -coeffs.b_plus],
            [-coeffs.b_minus.conjugate(), -coeffs.a_minus.conjugate()],
        ]
    )
    return float(-np.max(np.linalg.eigvals(drift).real))


def noise_diffusion(coeffs: DerivedCoeffs) -> NoiseDiffusion:
    """Strengths of the nonvanishing noise correlations.

    D_aa multiplies <f_a(t') f_a*(t)> and D_ba multiplies <f_b(t') f_a(t)>.
    The coherence factor enters as the mean of both phase signs, which is
    exp(-theta) sqrt(1 - eta^2) in averaged mode.
    """
    gain = coeffs.A / (2.0 * coeffs.B)
    D_aa = 2.0 * gain * (coeffs.C_plus - (coeffs.D_plus + coeffs.D_minus) / 2.0)
    D_ba = gain * (coeffs.drive - coeffs.E_plus)
    return NoiseDiffusion(D_aa=D_aa, D_ba=D_ba)


def noise_theta_sensitivity(params: PhysicalParams) -> float:
    """Closed-form derivative of D_ba with respect to the phase fluctuation.

    Args:
        params: Parameters in Gaussian-averaged mode

    Returns:
        d(D_ba)/d(theta) as a float; negative for Omega^2 < 2 Gamma gamma,
        zero at equality and positive above. Averaging replaces exp(+-i phi)
        by the real factor exp(-theta), so D_ba and its derivative are real.

    Raises:
        ConfigurationError: If the parameters use a fixed phase
    """
    if not params.averaged:
        raise ConfigurationError("theta sensitivity requires averaged phase mode")
    coeffs = derive_coeffs(params)
    gain = coeffs.A / (2.0 * coeffs.B)
    return -gain * (2.0 - coeffs.zetap * coeffs.zeta) * coeffs.Theta_p.real


def compensation_regime(
    params: PhysicalParams,
) -> Literal["decrease", "neutral", "increase"]:
    """Driving-amplitude direction that offsets phase-fluctuation damping."""
    critical = 2.0 * params.Gamma * params.gamma
    drive2 = params.Omega**2
    if math.isclose(drive2, critical, rel_tol=COMPENSATION_RTOL):
        return "neutral"
    return "decrease" if drive2 < critical else "increase"


def initial_atom(params: PhysicalParams) -> InitialPopulations:
    """Initial populations and coherence magnitude set by eta."""
    return InitialPopulations(
        rho_aa0=(1.0 - params.eta) / 2.0,
        rho_cc0=(1.0 + params.eta) / 2.0,
        rho_ac0=math.sqrt(max(0.0, 1.0 - params.eta**2)) / 2.0,
    )
