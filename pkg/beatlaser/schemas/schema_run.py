"""Pydantic schemas for run configuration and command results.

A run is described by a single JSON document. All physical inputs are in
units of the dephasing rate gamma unless a ``units`` block says otherwise.
"""

from typing import Annotated, Any, Literal

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from beatlaser.config.settings import DEFAULT_DT, MIN_TRAJECTORIES
from beatlaser.schemas.schema_fock import FockConfig
from beatlaser.schemas.schema_moments import MomentState
from beatlaser.schemas.schema_params import PhysicalParams

SweepVariable = Literal["eta", "theta", "Omega", "kappa", "phi"]


class UnitsConfig(BaseModel):
    """Rate unit of the inputs.

    ``gamma_unit`` is the value, in the input units, that becomes 1 after
    normalization: rates are divided by it and times multiplied by it.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma_unit: float = Field(1.0, gt=0.0, description="Rate that maps to 1")


class IntegrationConfig(BaseModel):
    """Time grid of deterministic integrations."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    t_final: float = Field(20.0, ge=0.0, description="Final time")
    dt: float = Field(DEFAULT_DT, gt=0.0, description="RK4 step of the moment ODEs")
    sample_dt: float | None = Field(
        None, gt=0.0, description="Spacing of emitted rows; default dt"
    )


class SweepAxis(BaseModel):
    """One swept parameter with an inclusive linear grid."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variable: SweepVariable
    start: float
    stop: float
    steps: int = Field(..., ge=2, description="Number of grid points")


class SweepConfig(BaseModel):
    """One- or two-dimensional parameter grid."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    axes: list[SweepAxis] = Field(..., min_length=1, max_length=2)

    @model_validator(mode="after")
    def _distinct_axes(self) -> "SweepConfig":
        names = [axis.variable for axis in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"Sweep axes must differ, got {names}")
        if {"theta", "phi"} <= set(names):
            raise ValueError("theta and phi select different phase modes")
        return self


class McConfig(BaseModel):
    """Monte-Carlo ensemble settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_traj: int = Field(10_000, ge=MIN_TRAJECTORIES, description="Trajectories")
    seed: int = Field(0, ge=0, description="Master seed")
    dt: float | None = Field(None, gt=0.0, description="Euler-Maruyama step")
    sample_times: list[Annotated[float, Field(ge=0.0)]] | None = Field(
        None, description="Times of the estimates; default t_final"
    )


class OutputConfig(BaseModel):
    """Where and how results are written."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    path: str | None = Field(None, description="Output file; stdout when omitted")
    format: Literal["csv", "json"] | None = Field(
        None, description="Output format; each command has its own default"
    )


class RunConfig(BaseModel):
    """Complete configuration of one CLI invocation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    params: PhysicalParams
    units: UnitsConfig = Field(default_factory=UnitsConfig)
    integration: IntegrationConfig = Field(default_factory=IntegrationConfig)
    initial: MomentState | None = Field(
        None, description="Initial moments; two-mode vacuum when omitted"
    )
    fock: FockConfig | None = None
    sweep: SweepConfig | None = None
    mc: McConfig | None = None
    output: OutputConfig = Field(default_factory=OutputConfig)

    def normalized(self) -> "RunConfig":
        """Copy with every rate divided and every time multiplied by gamma_unit."""
        unit = self.units.gamma_unit
        if unit == 1.0:
            return self
        params = self.params.model_dump()
        for name in ("g", "r_a", "gamma", "Gamma", "Omega", "kappa"):
            params[name] /= unit
        update: dict[str, Any] = {
            "params": PhysicalParams.model_validate(params),
            "units": UnitsConfig(),
            "integration": self.integration.model_copy(
                update={
                    "t_final": self.integration.t_final * unit,
                    "dt": self.integration.dt * unit,
                    "sample_dt": None
                    if self.integration.sample_dt is None
                    else self.integration.sample_dt * unit,
                }
            ),
        }
        if self.sweep is not None:
            axes = [
                axis.model_copy(
                    update={"start": axis.start / unit, "stop": axis.stop / unit}
                )
                if axis.variable in ("Omega", "kappa")
                else axis
                for axis in self.sweep.axes
            ]
            update["sweep"] = SweepConfig(axes=axes)
        if self.mc is not None:
            update["mc"] = self.mc.model_copy(
                update={
                    "dt": None if self.mc.dt is None else self.mc.dt * unit,
                    "sample_times": None
                    if self.mc.sample_times is None
                    else [t * unit for t in self.mc.sample_times],
                }
            )
        if self.fock is not None and self.fock.dt is not None:
            update["fock"] = self.fock.model_copy(update={"dt": self.fock.dt * unit})
        return self.model_copy(update=update)


class CommandResult(BaseModel):
    """Output of a command handler: a table or a document, plus exit code."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    exit_code: int = Field(0, description="Process exit code")
    table: pd.DataFrame | None = Field(None, description="Tabular result")
    document: dict[str, Any] | None = Field(None, description="Structured result")
    default_format: Literal["csv", "json"] = "csv"

    @property
    def empty(self) -> bool:
        """True when the command produced no payload."""
        return self.table is None and self.document is None


def linear_grid(axis: SweepAxis) -> list[float]:
    """Inclusive grid of ``axis.steps`` evenly spaced values."""
    span = axis.stop - axis.start
    return [
        axis.start + span * k / (axis.steps - 1) if k < axis.steps - 1 else axis.stop
        for k in range(axis.steps)
    ]
