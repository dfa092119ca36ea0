"""Pydantic schemas for the doubled phase-space Monte-Carlo ensemble."""

from pydantic import BaseModel, ConfigDict, Field

ENSEMBLE_QUANTITIES: tuple[str, ...] = (
    "n_a",
    "n_b",
    "re_m",
    "im_m",
    "re_a",
    "im_a",
    "re_b",
    "im_b",
)


class DoubledState(BaseModel):
    """One trajectory of the four independent c-number variables.

    ``alpha_plus`` and ``beta_plus`` stand in for the conjugates but are not
    constrained to equal conj(alpha) and conj(beta) along a trajectory; only
    ensemble averages carry physical meaning.
    """

    model_config = ConfigDict(frozen=True)

    alpha: complex = 0j
    beta: complex = 0j
    alpha_plus: complex = 0j
    beta_plus: complex = 0j


class EnsembleEstimate(BaseModel):
    """Ensemble means and jackknife standard errors at one time point.

    Keys of ``values`` and ``stderr`` are the names in ENSEMBLE_QUANTITIES.
    """

    model_config = ConfigDict(frozen=True)

    t: float = Field(..., ge=0.0, description="Sample time")
    n_traj: int = Field(..., ge=1, description="Number of trajectories")
    values: dict[str, float] = Field(..., description="Ensemble means")
    stderr: dict[str, float] = Field(..., description="Jackknife standard errors")
