"""Pytest configuration and shared fixtures."""

import json
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from beatlaser.schemas.schema_fock import FockConfig
from beatlaser.schemas.schema_moments import MomentState
from beatlaser.schemas.schema_params import DerivedCoeffs, PhysicalParams
from beatlaser.services.service_coeffs import derive_coeffs

# Reference parameter set: A = 0.8, B = 10, below threshold
P1: dict[str, Any] = {
    "g": 0.2,
    "r_a": 10.0,
    "gamma": 1.0,
    "Gamma": 1.0,
    "Omega": 1.0,
    "kappa": 0.2,
    "eta": 0.0,
    "phase": {"mode": "averaged", "theta": 0.0},
}

# Exact steady state at P1
P1_STEADY_N_A = 104.0 / 99.0
P1_STEADY_N_B = 2.0 / 11.0
P1_STEADY_M = 19.0 / 33.0


@pytest.fixture
def p1_params() -> PhysicalParams:
    """Reference parameters P1."""
    return PhysicalParams.model_validate(P1)


@pytest.fixture
def p1_coeffs(p1_params: PhysicalParams) -> DerivedCoeffs:
    """Derived coefficients at P1."""
    return derive_coeffs(p1_params)


@pytest.fixture
def make_params():
    """Factory for P1 with selected fields overridden."""

    def _make(**overrides: Any) -> PhysicalParams:
        return PhysicalParams.model_validate({**P1, **overrides})

    return _make


@pytest.fixture
def random_params():
    """Factory drawing valid parameter sets from a seeded generator.

    Rates span roughly an order of magnitude around the dephasing unit and
    one draw in ten switches the driving off. The threshold margin may take
    either sign.
    """

    def _draw(rng: np.random.Generator, *, fixed: bool = False) -> PhysicalParams:
        phase = (
            {"mode": "fixed", "phi": float(rng.uniform(0.0, 2.0 * np.pi))}
            if fixed
            else {"mode": "averaged", "theta": float(rng.uniform(0.0, 3.0))}
        )
        omega = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.05, 3.0))
        return PhysicalParams.model_validate(
            {
                "g": float(rng.uniform(0.01, 0.5)),
                "r_a": float(rng.uniform(0.5, 20.0)),
                "gamma": float(rng.uniform(0.2, 3.0)),
                "Gamma": float(rng.uniform(0.2, 3.0)),
                "Omega": omega,
                "kappa": float(rng.uniform(0.01, 2.0)),
                "eta": float(rng.uniform(-1.0, 1.0)),
                "phase": phase,
            }
        )

    return _draw


@pytest.fixture
def vacuum_state() -> MomentState:
    """Two-mode vacuum moments."""
    return MomentState()


@pytest.fixture
def small_fock() -> FockConfig:
    """Truncation wide enough for P1 up to t = 20."""
    return FockConfig(n_max_a=12, n_max_b=6)


@pytest.fixture
def p1_config_file(tmp_path: Path):
    """Write a run configuration around P1 and return its path."""

    def _write(**sections: Any) -> Path:
        document = {"params": dict(P1), **sections}
        path = tmp_path / "config.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write
