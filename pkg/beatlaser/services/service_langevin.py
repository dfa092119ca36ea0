"""Service functions for Monte-Carlo verification of the Langevin equations.

The c-number equations are simulated in a doubled phase space with
independent variables (alpha, beta, alpha_plus, beta_plus). The normal-ordered
noise correlations are realized by a complex factor R with R @ R.T = D, so
individual trajectories are bookkeeping devices while ensemble means follow
the moment equations exactly.

Trajectories are generated in fixed-size blocks. Block k draws from a Philox
counter-based generator keyed by the seed and jumped k times, so the result
does not depend on how blocks are scheduled across worker threads.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg

from beatlaser.config.settings import MAX_WORKERS, MC_BLOCK_SIZE, MIN_TRAJECTORIES
from beatlaser.schemas.schema_langevin import (
    ENSEMBLE_QUANTITIES,
    DoubledState,
    EnsembleEstimate,
)
from beatlaser.schemas.schema_params import DerivedCoeffs
from beatlaser.services.service_coeffs import noise_diffusion, threshold_margin
from beatlaser.utils.errors import (
    ConfigurationError,
    FactorizationFailureError,
    NonFiniteError,
    UnstableError,
)

logger = logging.getLogger(__name__)


def diffusion_matrix(coeffs: DerivedCoeffs) -> np.ndarray:
    """Symmetric diffusion matrix over (f_a, f_b, f_a+, f_b+)."""
    noise = noise_diffusion(coeffs)
    D = np.zeros((4, 4), dtype=np.complex128)
    D[0, 2] = D[2, 0] = noise.D_aa
    D[0, 1] = D[1, 0] = noise.D_ba
    D[2, 3] = D[3, 2] = np.conj(noise.D_ba)
    return D


def diffusion_factor(coeffs: DerivedCoeffs) -> np.ndarray:
    """Complex factor R with R @ R.T equal to the diffusion matrix.

    Built from the eigendecomposition D = U diag(w) U.T as U diag(sqrt(w)),
    taking the principal complex root of negative eigenvalues.

    Raises:
        ConfigurationError: In fixed phase mode
        FactorizationFailureError: If the reconstruction error exceeds 1e-12
    """
    if not coeffs.averaged:
        raise ConfigurationError("Monte-Carlo verification needs averaged phase mode")
    D = diffusion_matrix(coeffs).real
    try:
        w, U = scipy.linalg.eigh(D)
    except scipy.linalg.LinAlgError as e:
        raise FactorizationFailureError(f"Diffusion matrix {D.tolist()}: {e}") from e
    R = U * np.sqrt(w.astype(np.complex128))
    error = float(np.max(np.abs(R @ R.T - D)))
    if error > 1e-12 * max(1.0, float(np.max(np.abs(D)))):
        raise FactorizationFailureError(
            f"R R^T misses diffusion matrix {D.tolist()} by {error:.3g}"
        )
    return R


def doubled_drift(coeffs: DerivedCoeffs) -> np.ndarray:
    """Linear drift matrix on (alpha, beta, alpha_plus, beta_plus)."""
    a_p, a_m = coeffs.a_plus.real, coeffs.a_minus.real
    b_p, b_m = coeffs.b_plus.real, coeffs.b_minus.real
    return np.array(
        [
            [-a_p, 0.0, 0.0, -b_p],
            [0.0, -a_m, -b_m, 0.0],
            [0.0, -b_p, -a_p, 0.0],
            [-b_m, 0.0, 0.0, -a_m],
        ],
        dtype=np.float64,
    )


def _observables(X: np.ndarray) -> dict[str, np.ndarray]:
    alpha, beta, alpha_plus, beta_plus = X[:, 0], X[:, 1], X[:, 2], X[:, 3]
    m = alpha * beta
    return {
        "n_a": (alpha_plus * alpha).real,
        "n_b": (beta_plus * beta).real,
        "re_m": m.real,
        "im_m": m.imag,
        "re_a": alpha.real,
        "im_a": alpha.imag,
        "re_b": beta.real,
        "im_b": beta.imag,
    }


def _jackknife(samples: np.ndarray) -> tuple[float, float]:
    """Mean and delete-one jackknife standard error of a sample."""
    n = samples.size
    mean = float(np.mean(samples))
    leave_one_out = (samples.sum() - samples) / (n - 1)
    spread = np.sum((leave_one_out - leave_one_out.mean()) ** 2)
    return mean, math.sqrt((n - 1) / n * float(spread))


def _run_block(
    block: int,
    size: int,
    seed: int,
    X0: np.ndarray,
    K: np.ndarray,
    R: np.ndarray,
    h: float,
    n_steps: int,
    sample_steps: list[int],
) -> list[dict[str, np.ndarray]]:
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(block))
    X = np.tile(X0, (size, 1))
    propagator = np.eye(4) + h * K
    kick = math.sqrt(h) * R
    samples = []
    pending = iter(sample_steps)
    target = next(pending, None)
    for step in range(n_steps + 1):
        while target == step:
            samples.append(_observables(X))
            target = next(pending, None)
        if step == n_steps:
            break
        xi = rng.standard_normal((size, 4))
        X = X @ propagator.T + xi @ kick.T
    if not np.all(np.isfinite(X)):
        raise NonFiniteError(f"Trajectory block {block} became non-finite")
    return samples


def simulate_ensemble(
    coeffs: DerivedCoeffs,
    n_traj: int,
    t_final: float,
    dt: float,
    seed: int,
    sample_times: list[float] | None = None,
    initial: DoubledState | None = None,
    max_workers: int = MAX_WORKERS,
) -> list[EnsembleEstimate]:
    """Euler-Maruyama ensemble in the doubled phase space.

    Args:
        coeffs: Derived coefficients in averaged phase mode
        n_traj: Number of trajectories (>= 100)
        t_final: Duration of the run
        dt: Nominal step; shrunk so that t_final is a whole number of steps
        seed: Master seed of the counter-based generators
        sample_times: Times at which to estimate moments; default [t_final]
        initial: Starting point of every trajectory; default vacuum
        max_workers: Thread pool size; does not affect the result

    Returns:
        One EnsembleEstimate per sample time, estimates of n_a = <alpha+ alpha>,
        n_b = <beta+ beta>, m = <alpha beta> and the mean amplitudes with
        jackknife standard errors. Identical for identical arguments.

    Raises:
        ConfigurationError: In fixed phase mode, or if n_traj < 100, dt <= 0
            or t_final < 0, or if a sample time lies outside [0, t_final]
        UnstableError: If the threshold margin is not positive
        NonFiniteError: If trajectories overflow
    """
    if not coeffs.averaged:
        raise ConfigurationError("Monte-Carlo verification needs averaged phase mode")
    if n_traj < MIN_TRAJECTORIES:
        raise ConfigurationError(
            f"n_traj must be at least {MIN_TRAJECTORIES}, got {n_traj}"
        )
    if dt <= 0.0 or t_final < 0.0:
        raise ConfigurationError(f"Need dt > 0 and t_final >= 0, got {dt}, {t_final}")
    margin = threshold_margin(coeffs)
    if margin <= 0.0:
        raise UnstableError(f"Monte Carlo needs a decaying system, margin {margin:.6g}")

    n_steps = max(1, math.ceil(t_final / dt - 1e-9)) if t_final > 0.0 else 0
    h = t_final / n_steps if n_steps else dt
    times = sorted(sample_times) if sample_times else [t_final]
    if times[0] < 0.0 or times[-1] > t_final * (1.0 + 1e-12):
        raise ConfigurationError(
            f"Sample times must lie in [0, {t_final:g}], got {times}"
        )
    sample_steps = [min(n_steps, round(t / h)) if n_steps else 0 for t in times]

    state = initial or DoubledState()
    X0 = np.array(
        [state.alpha, state.beta, state.alpha_plus, state.beta_plus],
        dtype=np.complex128,
    )
    K = doubled_drift(coeffs)
    R = diffusion_factor(coeffs)

    sizes = [MC_BLOCK_SIZE] * (n_traj // MC_BLOCK_SIZE)
    if n_traj % MC_BLOCK_SIZE:
        sizes.append(n_traj % MC_BLOCK_SIZE)

    logger.info(
        "Monte Carlo: %d trajectories in %d blocks, %d steps of %.4g",
        n_traj,
        len(sizes),
        n_steps,
        h,
    )
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        blocks = list(
            pool.map(
                lambda job: _run_block(
                    job[0], job[1], seed, X0, K, R, h, n_steps, sample_steps
                ),
                enumerate(sizes),
            )
        )

    estimates = []
    for index, step in enumerate(sample_steps):
        values: dict[str, float] = {}
        stderr: dict[str, float] = {}
        for name in ENSEMBLE_QUANTITIES:
            pooled = np.concatenate([block[index][name] for block in blocks])
            values[name], stderr[name] = _jackknife(pooled)
        estimates.append(
            EnsembleEstimate(t=step * h, n_traj=n_traj, values=values, stderr=stderr)
        )
    return estimates
