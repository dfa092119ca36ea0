"""Command handler for ``beatlaser derive``.

Prints every derived coefficient, the noise diffusion strengths and the
threshold margin for one parameter set.
"""

import logging
import math
from typing import Any

from beatlaser.config.settings import EXIT_OK
from beatlaser.schemas.schema_run import CommandResult, RunConfig
from beatlaser.services.service_coeffs import (
    compensation_regime,
    derive_coeffs,
    noise_diffusion,
    noise_theta_sensitivity,
    threshold_margin,
)
from beatlaser.utils.errors import BeatLaserError, exit_code_for

logger = logging.getLogger(__name__)


def cmd_derive(config: RunConfig) -> CommandResult:
    """Coefficient document for the configured parameters.

    Args:
        config: Normalized run configuration

    Returns:
        CommandResult whose document holds every DerivedCoeffs field (with
        ``lambda`` under its published name), D_aa, D_ba, the threshold margin
        and the driving-compensation regime. Exit code 0 on success.
    """
    try:
        coeffs = derive_coeffs(config.params)
        noise = noise_diffusion(coeffs)
        document: dict[str, Any] = coeffs.model_dump(by_alias=True)
        document.update(noise.model_dump())
        document["margin"] = threshold_margin(coeffs)
        document["dD_ba_dtheta"] = (
            noise_theta_sensitivity(config.params)
            if config.params.averaged
            else math.nan
        )
        document["compensation_regime"] = compensation_regime(config.params)
    except BeatLaserError as e:
        logger.error("derive failed: %s", e)
        return CommandResult(exit_code=exit_code_for(e), default_format="json")

    logger.info("Threshold margin %.6g", document["margin"])
    return CommandResult(exit_code=EXIT_OK, document=document, default_format="json")
