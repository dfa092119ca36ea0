"""Pydantic schemas for physical parameters and derived coefficients.

This module defines the raw model knobs of the cascade laser, the two ways
the preparation phase can be treated, and the scalar coefficients of the
master equation and of the c-number Langevin system derived from them.
"""

import math
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field


class GaussianAveraged(BaseModel):
    """Preparation phase fluctuating as a Gaussian process.

    Averaging replaces every exp(+i phi) and exp(-i phi) by exp(-theta).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: Literal["averaged"] = "averaged"
    theta: float = Field(0.0, ge=0.0, description="Phase fluctuation (variance) theta")


class FixedPhase(BaseModel):
    """Preparation phase locked to a definite value phi."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: Literal["fixed"] = "fixed"
    phi: float = Field(
        0.0, ge=0.0, lt=2.0 * math.pi, description="Locked phase angle phi in [0, 2pi)"
    )


PhaseMode = Annotated[GaussianAveraged | FixedPhase, Field(discriminator="mode")]


class PhysicalParams(BaseModel):
    """Raw parameters of the two-photon coherent beat laser.

    Rates are in units of the dephasing rate gamma by convention; the model
    itself only needs them to be consistent.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    g: float = Field(..., gt=0.0, description="Atom-field coupling constant")
    r_a: float = Field(..., gt=0.0, description="Atomic injection rate")
    gamma: float = Field(1.0, gt=0.0, description="Dephasing rate gamma")
    Gamma: float = Field(1.0, gt=0.0, description="Atomic decay rate Gamma")
    Omega: float = Field(0.0, ge=0.0, description="Driving amplitude Omega")
    kappa: float = Field(..., gt=0.0, description="Cavity damping constant kappa")
    eta: float = Field(0.0, ge=-1.0, le=1.0, description="Initial inversion eta")
    phase: PhaseMode = Field(
        default_factory=GaussianAveraged, description="Preparation phase treatment"
    )

    @property
    def averaged(self) -> bool:
        """True when the preparation phase is Gaussian averaged."""
        return isinstance(self.phase, GaussianAveraged)


class DerivedCoeffs(BaseModel):
    """Derived scalars of the master equation and the Langevin drift.

    Every coefficient is stored as a complex number. In averaged mode the
    imaginary parts vanish identically except for ``epsilon`` (and the
    quantities divided by it), which becomes purely imaginary below the
    oscillation boundary Z**2 < 0.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    averaged: bool = Field(..., description="Gaussian-averaged phase mode")
    extrapolated: bool = Field(
        ..., description="Propagator scalars extended beyond the averaged derivation"
    )
    kappa: float = Field(..., description="Cavity damping constant")
    zeta: float = Field(..., description="Omega / gamma")
    zetap: float = Field(..., description="Omega / Gamma")
    chi: float = Field(..., description="gamma / Gamma")
    A: float = Field(..., description="Linear gain coefficient 2 r_a g^2 / gamma^2")
    B: float = Field(..., description="(4 + zeta^2)(1 + zeta' zeta)")
    drive: float = Field(..., description="Driving term zeta'(1 + zeta' zeta)")
    Theta_p: complex = Field(..., description="Coherence factor carrying exp(-i phi)")
    Theta_m: complex = Field(..., description="Coherence factor carrying exp(+i phi)")
    C_plus: float = Field(..., description="Gain coefficient of mode a")
    C_minus: float = Field(..., description="Loss coefficient of mode b")
    D_plus: complex
    D_minus: complex
    E_plus: complex
    E_minus: complex
    a_plus: complex = Field(..., description="Drift of alpha")
    a_minus: complex = Field(..., description="Drift of beta")
    b_plus: complex = Field(..., description="Coupling of alpha to conj(beta)")
    b_minus: complex = Field(..., description="Coupling of beta to conj(alpha)")
    lambda_: complex = Field(..., alias="lambda", description="Decay scale lambda")
    delta: complex = Field(..., description="(a_minus - a_plus) / 2")
    Z: complex
    epsilon: complex
    p: complex
    q_plus: complex
    q_minus: complex


class NoiseDiffusion(BaseModel):
    """Delta-correlation strengths of the normal-ordered noise forces.

    Only the two listed pairings are nonzero; <f_b f_b*>, <f_a f_a>,
    <f_b f_b> and <f_b* f_a> vanish identically.
    """

    model_config = ConfigDict(frozen=True)

    D_aa: complex = Field(..., description="Strength of <f_a(t') f_a*(t)>")
    D_ba: complex = Field(..., description="Strength of <f_b(t') f_a(t)>")


class InitialPopulations(BaseModel):
    """Initial atomic density-matrix elements fixed by the inversion eta."""

    model_config = ConfigDict(frozen=True)

    rho_aa0: float = Field(..., description="Upper-level population (1 - eta)/2")
    rho_cc0: float = Field(..., description="Lower-level population (1 + eta)/2")
    rho_ac0: float = Field(..., description="Coherence magnitude sqrt(1 - eta^2)/2")
