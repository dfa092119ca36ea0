"""Service functions for the adiabatic atomic coefficients.

These are derivation-level checks: the closed-form populations and
coherences are verified against the adiabatic balance equations and the
cross coherences are decomposed into the master-equation coefficients. The
Fock oracle does not depend on this module.
"""

import math

import numpy as np

from beatlaser.schemas.schema_atomic import AtomicCoeffs, CrossCoeffs
from beatlaser.schemas.schema_params import FixedPhase, PhysicalParams
from beatlaser.services.service_coeffs import initial_atom


def phase_value(params: PhysicalParams) -> complex:
    """Phase factor multiplying the initial coherence.

    exp(-i phi) for a locked phase, exp(-theta) after Gaussian averaging.
    """
    if isinstance(params.phase, FixedPhase):
        phi = params.phase.phi
        return complex(math.cos(phi), -math.sin(phi))
    return complex(math.exp(-params.phase.theta), 0.0)


def initial_density(params: PhysicalParams) -> np.ndarray:
    """Initial atomic density matrix in the (|a>, |b>, |c>) basis.

    Args:
        params: Physical parameters; eta and the phase mode are used

    Returns:
        3x3 complex Hermitian matrix with unit trace. The middle level is
        empty. In fixed mode the state is pure.
    """
    populations = initial_atom(params)
    coherence = populations.rho_ac0 * phase_value(params)
    rho = np.zeros((3, 3), dtype=np.complex128)
    rho[0, 0] = populations.rho_aa0
    rho[2, 2] = populations.rho_cc0
    rho[0, 2] = coherence
    rho[2, 0] = np.conj(coherence)
    return rho


def adiabatic_populations(params: PhysicalParams, phase: complex) -> AtomicCoeffs:
    """Adiabatic solutions for rho_aa, rho_cc and rho_ac.

    Args:
        params: Physical parameters
        phase: Phase factor, exp(-i phi) or exp(-theta)

    Returns:
        AtomicCoeffs; c_aa + c_cc equals r_a / Gamma for every phase factor

    Example:
        >>> p = PhysicalParams(g=0.2, r_a=10, Omega=1, kappa=0.2)
        >>> adiabatic_populations(p, 1.0).c_aa
        (2.5+0j)
    """
    gamma, Gamma, Omega, eta = params.gamma, params.Gamma, params.Omega, params.eta
    root = math.sqrt(max(0.0, 1.0 - eta**2))
    norm = gamma * Gamma + Omega**2
    coherent = Gamma * Omega * root * phase

    c_aa = params.r_a * (gamma * Gamma * (1.0 - eta) - coherent + Omega**2) / (
        2.0 * Gamma * norm
    )
    c_cc = params.r_a * (gamma * Gamma * (1.0 + eta) + coherent + Omega**2) / (
        2.0 * Gamma * norm
    )
    c_ac = params.r_a * (Gamma * root * phase - Omega * eta) / (2.0 * norm)
    return AtomicCoeffs(c_aa=c_aa, c_cc=c_cc, c_ac=c_ac, phase=phase)


def adiabatic_cross(params: PhysicalParams, phase: complex) -> CrossCoeffs:
    """Operator coefficients of the cross coherences rho_ab and rho_cb."""
    zeta = params.Omega / params.gamma
    zetap = params.Omega / params.Gamma
    chi = params.gamma / params.Gamma
    eta = params.eta
    coherence = math.sqrt(max(0.0, 1.0 - eta**2)) * phase
    drive = zetap * (1.0 + zetap * zeta)
    interference = eta * (zetap * zeta - 2.0 * chi)

    prefactor = -params.g * params.r_a / (
        params.gamma**2 * (4.0 + zeta**2) * (1.0 + zeta * zetap)
    )
    return CrossCoeffs(
        prefactor=prefactor,
        ab_a=2.0 * (zetap**2 + chi) + interference - (2.0 * zetap + zeta) * coherence,
        ab_bdag=drive + 3.0 * eta * zetap - (2.0 - zetap * zeta) * coherence,
        cb_a=drive - 3.0 * eta * zetap + (2.0 - zetap * zeta) * coherence,
        cb_bdag=-(
            2.0 * (zetap**2 + chi) - interference + (2.0 * zetap + zeta) * coherence
        ),
    )


def adiabatic_residuals(params: PhysicalParams, coeffs: AtomicCoeffs) -> np.ndarray:
    """Residuals of the three adiabatic balance equations.

    Args:
        params: Physical parameters used to build ``coeffs``
        coeffs: Output of ``adiabatic_populations`` for the same parameters;
            its recorded phase factor enters the coherence equation

    Returns:
        Complex vector of length 3; every entry vanishes for the closed-form
        solutions up to rounding.
    """
    populations = initial_atom(params)
    phase = coeffs.phase
    Omega, Gamma = params.Omega, params.Gamma
    return np.array(
        [
            params.r_a * populations.rho_aa0 - Omega * coeffs.c_ac - Gamma * coeffs.c_aa,
            params.r_a * populations.rho_cc0 + Omega * coeffs.c_ac - Gamma * coeffs.c_cc,
            params.r_a * populations.rho_ac0 * phase
            - (Omega / 2.0) * (coeffs.c_cc - coeffs.c_aa)
            - params.gamma * coeffs.c_ac,
        ],
        dtype=np.complex128,
    )
