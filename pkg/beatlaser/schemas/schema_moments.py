"""Pydantic schemas for first and second moments of the cavity modes."""

from pydantic import BaseModel, ConfigDict, Field


class FirstMoments(BaseModel):
    """Mean field amplitudes <a> and <b>."""

    model_config = ConfigDict(frozen=True)

    mean_a: complex = Field(0j, description="<a>")
    mean_b: complex = Field(0j, description="<b>")


class SecondMoments(BaseModel):
    """Normally ordered second moments.

    <a^dagger b^dagger> is conj(m) and is never stored separately. <a a>,
    <b b> and <a b^dagger> vanish under these dynamics.
    """

    model_config = ConfigDict(frozen=True)

    n_a: float = Field(0.0, description="<a^dagger a>")
    n_b: float = Field(0.0, description="<b^dagger b>")
    m: complex = Field(0j, description="<a b>")


class MomentState(BaseModel):
    """First and second moments at one time point."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(0.0, ge=0.0, description="Time")
    first: FirstMoments = Field(default_factory=FirstMoments)
    second: SecondMoments = Field(default_factory=SecondMoments)
