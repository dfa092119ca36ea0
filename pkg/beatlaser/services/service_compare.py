"""Service functions that evaluate several routes on a common time grid.

The moment ODEs, the closed-form propagators and the Fock oracle all produce
MomentState values; this module samples them at the same times and flattens
them into suffixed table columns for the transient and oracle commands.
"""

import logging
import math
from typing import Any

from beatlaser.config.column_mappings import (
    DIAGNOSTIC_COLUMN_MAPPINGS,
    FIRST_QUANTITIES,
    MOMENT_QUANTITIES,
)
from beatlaser.config.settings import ORACLE_ABS_TOL, ORACLE_BOUNDARY_FACTOR
from beatlaser.schemas.schema_fock import DensityMatrix, FockConfig
from beatlaser.schemas.schema_moments import FirstMoments, MomentState, SecondMoments
from beatlaser.schemas.schema_params import DerivedCoeffs
from beatlaser.services.service_analytic import mean_field, second_moments_closed
from beatlaser.services.service_fock import (
    diagnostics,
    evolve_trajectory,
    moments_of,
    vacuum,
)
from beatlaser.services.service_moments import integrate
from beatlaser.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


def moment_fields(state: MomentState | None, route: str) -> dict[str, float]:
    """Flatten a state into ``<quantity>_<route>`` columns; NaN when None."""
    if state is None:
        names = [*FIRST_QUANTITIES, *MOMENT_QUANTITIES]
        return {f"{name}_{route}": math.nan for name in names}
    first, second = state.first, state.second
    values = {
        "re_a": first.mean_a.real,
        "im_a": first.mean_a.imag,
        "re_b": first.mean_b.real,
        "im_b": first.mean_b.imag,
        "n_a": second.n_a,
        "n_b": second.n_b,
        "re_m": second.m.real,
        "im_m": second.m.imag,
    }
    return {f"{name}_{route}": value for name, value in values.items()}


def is_vacuum(state: MomentState) -> bool:
    """True when every moment vanishes."""
    return state.first == FirstMoments() and state.second == SecondMoments()


def sampled_trajectory(
    coeffs: DerivedCoeffs,
    state0: MomentState,
    t_final: float,
    dt: float,
    sample_dt: float | None,
) -> list[MomentState]:
    """
    RK4 moment trajectory thinned to every ``sample_dt``.

    The stride is the nearest whole number of steps; the final time is always
    kept.
    """
    states = integrate(coeffs, state0, t_final, dt)
    stride = max(1, round(sample_dt / dt)) if sample_dt else 1
    indices = list(range(0, len(states), stride))
    if indices[-1] != len(states) - 1:
        indices.append(len(states) - 1)
    return [states[k] for k in indices]


def analytic_state(
    coeffs: DerivedCoeffs, state0: MomentState, elapsed: float
) -> MomentState | None:
    """Closed-form moments after ``elapsed``; None in fixed phase mode."""
    if not coeffs.averaged:
        return None
    return MomentState(
        t=state0.t + elapsed,
        first=mean_field(coeffs, state0.first, elapsed),
        second=second_moments_closed(coeffs, state0.second, elapsed),
    )


def fock_states(
    coeffs: DerivedCoeffs,
    fockcfg: FockConfig,
    state0: MomentState,
    times: list[float],
) -> list[DensityMatrix]:
    """
    Fock-space density matrices from the vacuum at the given elapsed times.

    Raises:
        ConfigurationError: If the initial moments are not those of the vacuum
        TruncationOverflowError: If the truncation is too small
    """
    if not is_vacuum(state0):
        raise ConfigurationError("The Fock oracle starts from the two-mode vacuum")
    logger.info(
        "Fock oracle: truncation %s, %d sample times", fockcfg.dims, len(times)
    )
    return evolve_trajectory(
        coeffs,
        fockcfg,
        vacuum(fockcfg),
        times,
        on_sample=lambda rho: logger.debug("Fock state recorded at t=%.6g", rho.t),
    )


def fock_fields(rho: DensityMatrix) -> dict[str, Any]:
    """Fock moment columns plus the diagnostic columns of one state."""
    state = moments_of(rho)
    fields = {
        key: value
        for key, value in moment_fields(state, "fock").items()
        if key.removesuffix("_fock") in MOMENT_QUANTITIES
    }
    report = diagnostics(rho)
    for field, column in DIAGNOSTIC_COLUMN_MAPPINGS.items():
        fields[column] = getattr(report, field)
    return fields


def oracle_tolerance(boundary_pop: float) -> float:
    """Allowed |Fock - ODE| deviation, max(1e-3, 10 x boundary population)."""
    return max(ORACLE_ABS_TOL, ORACLE_BOUNDARY_FACTOR * boundary_pop)
