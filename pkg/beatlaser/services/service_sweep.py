"""Service functions for steady-state rows and parameter sweeps.

A sweep evaluates the steady state on every point of a one- or
two-dimensional grid. Points run concurrently on a thread pool; rows are
collected in grid order, so the table does not depend on scheduling.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import pandas as pd

from beatlaser.config.column_mappings import (
    REPORT_COLUMN_MAPPINGS,
    STATUS_OK,
    STATUS_UNSTABLE,
    STEADY_COLUMNS,
)
from beatlaser.config.settings import MAX_WORKERS
from beatlaser.schemas.schema_params import PhysicalParams
from beatlaser.schemas.schema_run import SweepConfig, linear_grid
from beatlaser.services.service_coeffs import (
    build_params,
    derive_coeffs,
    noise_theta_sensitivity,
    threshold_margin,
)
from beatlaser.services.service_moments import steady_state
from beatlaser.services.service_quant import nonclassicality_report
from beatlaser.utils.errors import NumericalError, UnstableError

logger = logging.getLogger(__name__)


def apply_axis_value(
    params: PhysicalParams, variable: str, value: float
) -> PhysicalParams:
    """
    Copy of ``params`` with one swept variable replaced and revalidated.

    Setting ``theta`` selects the averaged phase mode and setting ``phi`` the
    fixed one.

    Raises:
        ConfigurationError: If the new value violates a parameter bound
    """
    data = params.model_dump()
    if variable == "theta":
        data["phase"] = {"mode": "averaged", "theta": value}
    elif variable == "phi":
        data["phase"] = {"mode": "fixed", "phi": value}
    else:
        data[variable] = value
    return build_params(data)


def _parameter_fields(params: PhysicalParams) -> dict[str, Any]:
    phase = params.phase
    return {
        "eta": params.eta,
        "theta": phase.theta if params.averaged else math.nan,
        "phi": math.nan if params.averaged else phase.phi,
        "Omega": params.Omega,
        "kappa": params.kappa,
    }


def steady_row(params: PhysicalParams) -> dict[str, Any]:
    """
    One steady-state table row: parameters, moments and quantifiers.

    Args:
        params: Validated physical parameters

    Returns:
        Dict keyed by ``STEADY_COLUMNS``. Below threshold the status is "ok";
        otherwise the moment and quantifier columns are NaN and the status
        is "unstable". Other numerical failures give status "error: <reason>".
    """
    coeffs = derive_coeffs(params)
    margin = threshold_margin(coeffs)
    row: dict[str, Any] = dict.fromkeys(STEADY_COLUMNS, math.nan)
    row.update(_parameter_fields(params))
    row["margin"] = margin
    row["extrapolated"] = coeffs.extrapolated
    row["dD_ba_dtheta"] = (
        noise_theta_sensitivity(params) if params.averaged else math.nan
    )

    try:
        second = steady_state(coeffs)
        report = nonclassicality_report(second)
    except UnstableError as e:
        logger.debug("Unstable point %s: %s", _parameter_fields(params), e)
        row["status"] = STATUS_UNSTABLE
        return row
    except NumericalError as e:
        logger.warning("Steady state failed at %s: %s", _parameter_fields(params), e)
        row["status"] = f"error: {e}"
        return row

    row.update(
        {
            "n_a": second.n_a,
            "n_b": second.n_b,
            "re_m": second.m.real,
            "im_m": second.m.imag,
        }
    )
    for field, column in REPORT_COLUMN_MAPPINGS.items():
        value = getattr(report, field)
        row[column] = math.nan if value is None else value
    row["status"] = STATUS_OK
    return row


def grid_points(params: PhysicalParams, sweep: SweepConfig) -> list[PhysicalParams]:
    """
    Parameter sets of every grid point, first axis outermost.

    Raises:
        ConfigurationError: If any grid value violates a parameter bound
    """
    axes = [(axis.variable, linear_grid(axis)) for axis in sweep.axes]
    points = []
    for values in itertools.product(*(grid for _, grid in axes)):
        point = params
        for (variable, _), value in zip(axes, values, strict=True):
            point = apply_axis_value(point, variable, value)
        points.append(point)
    return points


def run_sweep(
    params: PhysicalParams, sweep: SweepConfig, max_workers: int = MAX_WORKERS
) -> pd.DataFrame:
    """
    Steady-state table over a parameter grid.

    Args:
        params: Base parameters; swept variables override them per point
        sweep: Grid definition
        max_workers: Thread pool size; does not affect the result

    Returns:
        DataFrame with ``STEADY_COLUMNS``, one row per grid point in grid order.
        Unstable points are flagged in ``status``, not dropped.

    Raises:
        ConfigurationError: If the grid leaves the valid parameter domain
    """
    points = grid_points(params, sweep)
    logger.info(
        "Sweeping %s over %d points",
        " x ".join(axis.variable for axis in sweep.axes),
        len(points),
    )
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(pool.map(steady_row, points))

    unstable = sum(row["status"] != STATUS_OK for row in rows)
    if unstable:
        logger.info("%d of %d grid points have no steady state", unstable, len(rows))
    return pd.DataFrame(rows, columns=STEADY_COLUMNS)
