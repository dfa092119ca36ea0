"""Pydantic schemas for the truncated two-mode Fock-space oracle."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from beatlaser.config.settings import DEFAULT_BOUNDARY_TOL


class FockConfig(BaseModel):
    """Photon-number truncation and run controls of the Fock oracle."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_max_a: int = Field(8, ge=1, description="Highest photon number kept in mode a")
    n_max_b: int = Field(8, ge=1, description="Highest photon number kept in mode b")
    boundary_tol: float = Field(
        DEFAULT_BOUNDARY_TOL,
        gt=0.0,
        description="Maximum population allowed in the top Fock layer",
    )
    dt: float | None = Field(
        None, gt=0.0, description="RK4 step; None selects the rate-based default"
    )

    @property
    def dims(self) -> tuple[int, int]:
        """Basis sizes (n_max_a + 1, n_max_b + 1)."""
        return self.n_max_a + 1, self.n_max_b + 1


class DensityMatrix(BaseModel):
    """Two-mode density operator in the basis |n_a, n_b>, row-major in modes.

    ``data`` has shape (dim_a * dim_b, dim_a * dim_b); the basis index of
    |n_a, n_b> is n_a * dim_b + n_b.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    data: np.ndarray = Field(..., description="Complex density matrix")
    dim_a: int = Field(..., ge=2)
    dim_b: int = Field(..., ge=2)
    t: float = Field(0.0, description="Evolution time of this state")
    max_correction: float = Field(
        0.0, ge=0.0, description="Largest Hermiticity correction applied while evolving"
    )


class FockDiagnostics(BaseModel):
    """Conservation and truncation diagnostics of a density matrix."""

    model_config = ConfigDict(frozen=True)

    trace_dev: float = Field(..., description="|Tr rho - 1|")
    herm_dev: float = Field(..., description="max |rho - rho^dagger|")
    min_eigenvalue: float = Field(..., description="Smallest eigenvalue of rho")
    boundary_pop: float = Field(
        ..., description="Population with n_a = n_max_a or n_b = n_max_b"
    )
