"""Pydantic schemas for the adiabatic atomic coefficients.

The atomic density-operator elements are proportional to the field density
operator after adiabatic elimination. These models hold the scalar
proportionality factors.
"""

from pydantic import BaseModel, ConfigDict, Field


class AtomicCoeffs(BaseModel):
    """Populations and coherence per unit field density operator."""

    model_config = ConfigDict(frozen=True)

    c_aa: complex = Field(..., description="rho_aa = c_aa * rho")
    c_cc: complex = Field(..., description="rho_cc = c_cc * rho")
    c_ac: complex = Field(..., description="rho_ac = c_ac * rho")
    phase: complex = Field(..., description="Phase factor the solutions were built for")


class CrossCoeffs(BaseModel):
    """Bracketed operator coefficients of rho_ab and rho_cb.

    rho_ab = prefactor * (ab_a * a + ab_bdag * b^dagger) rho and
    rho_cb = prefactor * (cb_a * a + cb_bdag * b^dagger) rho. The minus sign in
    front of the b^dagger bracket of rho_cb is folded into ``cb_bdag``.
    """

    model_config = ConfigDict(frozen=True)

    prefactor: float = Field(
        ..., description="-g r_a / (gamma^2 (4 + zeta^2)(1 + zeta zeta'))"
    )
    ab_a: complex
    ab_bdag: complex
    cb_a: complex
    cb_bdag: complex
