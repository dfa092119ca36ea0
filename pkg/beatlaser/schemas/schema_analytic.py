"""Pydantic schema for the analytic propagator kernels."""

from pydantic import BaseModel, ConfigDict, Field


class PropagatorKernels(BaseModel):
    """Homogeneous propagators of the Langevin pair at one time point.

    alpha(t) = F_plus alpha(0) + G_plus conj(beta(0)) + noise and
    beta(t) = F_minus beta(0) + G_minus conj(alpha(0)) + noise.
    """

    model_config = ConfigDict(frozen=True)

    t: float = Field(..., ge=0.0, description="Time (may be infinite)")
    F_plus: complex
    F_minus: complex
    G_plus: complex
    G_minus: complex
