"""Pydantic schema for the nonclassicality quantifiers."""

from pydantic import BaseModel, ConfigDict, Field


class NonclassicalityReport(BaseModel):
    """Squeezing, entanglement and photon-correlation measures.

    Conventions: quadratures scaled so the vacuum variance is 1, separable
    states satisfy S >= 2, and the logarithmic negativity uses the natural
    logarithm. ``g2_cross`` and ``cs_ratio`` are None when a mode is empty.
    """

    model_config = ConfigDict(frozen=True)

    n_total: float = Field(..., description="n_a + n_b")
    var_minus: float = Field(..., description="Combined quadrature variance, minus")
    var_plus: float = Field(..., description="Combined quadrature variance, plus")
    dgcz: float = Field(..., description="Inseparability witness S")
    log_neg: float = Field(..., ge=0.0, description="Logarithmic negativity")
    g2_cross: float | None = Field(None, description="Cross second-order correlation")
    cs_ratio: float | None = Field(None, description="Cauchy-Schwarz ratio")
