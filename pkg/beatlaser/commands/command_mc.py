"""Command handler for ``beatlaser mc``.

Runs the doubled phase-space ensemble and sets every estimate next to the
exactly propagated moment equations.
"""

import logging
import math

import pandas as pd

from beatlaser.config.column_mappings import MC_COLUMNS
from beatlaser.config.settings import EXIT_CONFIG, EXIT_OK, PHYSICALITY_TOL
from beatlaser.schemas.schema_langevin import (
    ENSEMBLE_QUANTITIES,
    DoubledState,
    EnsembleEstimate,
)
from beatlaser.schemas.schema_moments import MomentState
from beatlaser.schemas.schema_run import CommandResult, RunConfig
from beatlaser.services.service_coeffs import derive_coeffs
from beatlaser.services.service_compare import moment_fields
from beatlaser.services.service_langevin import simulate_ensemble
from beatlaser.services.service_moments import propagate_exact
from beatlaser.utils.errors import BeatLaserError, ConfigurationError, exit_code_for

logger = logging.getLogger(__name__)


def coherent_start(state0: MomentState) -> DoubledState:
    """
    Doubled phase-space point reproducing coherent initial moments.

    Raises:
        ConfigurationError: If the second moments are not those of a coherent
            state with the given amplitudes
    """
    alpha, beta = state0.first.mean_a, state0.first.mean_b
    second = state0.second
    mismatch = max(
        abs(second.n_a - abs(alpha) ** 2),
        abs(second.n_b - abs(beta) ** 2),
        abs(second.m - alpha * beta),
    )
    if mismatch > PHYSICALITY_TOL:
        raise ConfigurationError(
            "Monte Carlo starts from a coherent state: need n_a=|<a>|^2, "
            "n_b=|<b>|^2 and m=<a><b>"
        )
    return DoubledState(
        alpha=alpha,
        beta=beta,
        alpha_plus=alpha.conjugate(),
        beta_plus=beta.conjugate(),
    )


def _comparison_rows(
    estimate: EnsembleEstimate, reference: MomentState
) -> list[dict[str, object]]:
    ode = {
        key.removesuffix("_ode"): value
        for key, value in moment_fields(reference, "ode").items()
    }
    rows = []
    for quantity in ENSEMBLE_QUANTITIES:
        mc, stderr = estimate.values[quantity], estimate.stderr[quantity]
        rows.append(
            {
                "t": estimate.t,
                "quantity": quantity,
                "mc": mc,
                "stderr": stderr,
                "ode": ode[quantity],
                "z": abs(mc - ode[quantity]) / stderr if stderr > 0.0 else math.nan,
            }
        )
    return rows


def cmd_mc(config: RunConfig) -> CommandResult:
    """Monte-Carlo estimates with standard errors and ODE references.

    Returns:
        CommandResult in long format, one row per (time, quantity), with the
        z-score |MC - ODE| / stderr. Identical bytes for identical config.
        Exit code 1 without an ``mc`` block, 2 at or above threshold.
    """
    if config.mc is None:
        logger.error("mc needs an 'mc' block in the configuration")
        return CommandResult(exit_code=EXIT_CONFIG)
    mc = config.mc
    state0 = config.initial or MomentState()
    try:
        coeffs = derive_coeffs(config.params)
        start = coherent_start(state0)
        estimates = simulate_ensemble(
            coeffs,
            n_traj=mc.n_traj,
            t_final=config.integration.t_final,
            dt=mc.dt or config.integration.dt,
            seed=mc.seed,
            sample_times=mc.sample_times,
            initial=start,
        )
        rows = []
        for estimate in estimates:
            reference = propagate_exact(coeffs, state0, estimate.t)
            rows.extend(_comparison_rows(estimate, reference))
    except BeatLaserError as e:
        logger.error("mc failed: %s", e)
        return CommandResult(exit_code=exit_code_for(e))

    table = pd.DataFrame(rows, columns=MC_COLUMNS)
    outliers = int((table["z"] > 3.0).sum())
    logger.info(
        "Monte Carlo: %d of %d rows beyond 3 standard errors", outliers, len(table)
    )
    return CommandResult(exit_code=EXIT_OK, table=table)
