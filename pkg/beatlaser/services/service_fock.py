"""Service functions for the truncated Fock-space master-equation oracle.

The density operator is handled as a rank-4 tensor R[i, j, k, l] =
<i_a j_b| rho |k_a l_b>. Ladder operators act by shifting one index and
weighting with sqrt(n); products such as a a^dagger are applied as two
consecutive truncated shifts, so every group of the master equation stays
exactly traceless in the truncated space. No dim^2 x dim^2 superoperator is
ever built.
"""

import logging
from collections.abc import Callable, Iterable
from pathlib import Path

import numpy as np

from beatlaser.config.settings import (
    FOCK_DT_SCALE,
    HERMITICITY_TOL,
    POSITIVITY_WARN_FLOOR,
)
from beatlaser.schemas.schema_fock import DensityMatrix, FockConfig, FockDiagnostics
from beatlaser.schemas.schema_moments import FirstMoments, MomentState, SecondMoments
from beatlaser.schemas.schema_params import DerivedCoeffs
from beatlaser.utils.errors import (
    DimensionMismatchError,
    NonFiniteError,
    TruncationOverflowError,
)
from beatlaser.utils.integrators import step_times

logger = logging.getLogger(__name__)

SNAPSHOT_MAGIC = b"BLRHO1"
SNAPSHOT_HEADER = np.dtype(
    [("magic", "S6"), ("dim_a", "<u4"), ("dim_b", "<u4"), ("time", "<f8")]
)


def _weights(n: int, axis: int) -> np.ndarray:
    """sqrt(1), ..., sqrt(n - 1) broadcast along ``axis``."""
    shape = [1, 1, 1, 1]
    shape[axis] = n - 1
    return np.sqrt(np.arange(1, n, dtype=np.float64)).reshape(shape)


def _lower(R: np.ndarray, axis: int) -> np.ndarray:
    """out[.., n, ..] = sqrt(n + 1) R[.., n + 1, ..]; zero on the top layer."""
    n = R.shape[axis]
    out = np.zeros_like(R)
    dst = [slice(None)] * 4
    src = [slice(None)] * 4
    dst[axis] = slice(0, n - 1)
    src[axis] = slice(1, n)
    out[tuple(dst)] = _weights(n, axis) * R[tuple(src)]
    return out


def _raise(R: np.ndarray, axis: int) -> np.ndarray:
    """out[.., n, ..] = sqrt(n) R[.., n - 1, ..]; the top layer of R is dropped."""
    n = R.shape[axis]
    out = np.zeros_like(R)
    dst = [slice(None)] * 4
    src = [slice(None)] * 4
    dst[axis] = slice(1, n)
    src[axis] = slice(0, n - 1)
    out[tuple(dst)] = _weights(n, axis) * R[tuple(src)]
    return out


# Operator products on rho. Axes 0, 1 are the ket (a, b), axes 2, 3 the bra.
def _a_left(R):
    return _lower(R, 0)


def _adag_left(R):
    return _raise(R, 0)


def _b_left(R):
    return _lower(R, 1)


def _bdag_left(R):
    return _raise(R, 1)


def _a_right(R):
    return _raise(R, 2)


def _adag_right(R):
    return _lower(R, 2)


def _b_right(R):
    return _raise(R, 3)


def _bdag_right(R):
    return _lower(R, 3)


def _as_tensor(rho: DensityMatrix) -> np.ndarray:
    dim = rho.dim_a * rho.dim_b
    if rho.data.shape != (dim, dim):
        raise DimensionMismatchError(
            f"Density matrix shape {rho.data.shape} does not match "
            f"dims ({rho.dim_a}, {rho.dim_b})"
        )
    return rho.data.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)


def _from_tensor(
    R: np.ndarray, t: float = 0.0, max_correction: float = 0.0
) -> DensityMatrix:
    dim_a, dim_b = R.shape[0], R.shape[1]
    return DensityMatrix(
        data=R.reshape(dim_a * dim_b, dim_a * dim_b),
        dim_a=dim_a,
        dim_b=dim_b,
        t=t,
        max_correction=max_correction,
    )


def _dagger(R: np.ndarray) -> np.ndarray:
    return np.conj(R.transpose(2, 3, 0, 1))


def _trace(R: np.ndarray) -> complex:
    return complex(np.einsum("ijij->", R))


def _liouvillian_tensor(coeffs: DerivedCoeffs, R: np.ndarray) -> np.ndarray:
    """Time derivative of R under the adiabatic master equation."""
    gain = coeffs.A / (2.0 * coeffs.B)

    a_R = _a_left(R)
    adag_R = _adag_left(R)
    b_R = _b_left(R)
    bdag_R = _bdag_left(R)
    R_a = _a_right(R)
    R_adag = _adag_right(R)
    R_bdag = _bdag_right(R)

    a_R_adag = _adag_right(a_R)
    adag_R_a = _a_right(adag_R)
    b_R_bdag = _bdag_right(b_R)
    adag_R_bdag = _bdag_right(adag_R)
    b_R_a = _a_right(b_R)

    ada_R = _adag_left(a_R)
    R_ada = _a_right(R_adag)
    aad_R = _a_left(adag_R)
    R_aad = _adag_right(R_a)
    bdb_R = _bdag_left(b_R)
    R_bdb = _b_right(R_bdag)
    bdad_R = _bdag_left(adag_R)
    R_bdad = _adag_right(R_bdag)
    ab_R = _a_left(b_R)
    R_ab = _b_right(R_a)

    out = (coeffs.kappa / 2.0) * (2.0 * a_R_adag - ada_R - R_ada)
    out += gain * coeffs.C_plus * (2.0 * adag_R_a - R_aad - aad_R)
    out += (gain * coeffs.C_minus + coeffs.kappa / 2.0) * (
        2.0 * b_R_bdag - R_bdb - bdb_R
    )
    out += gain * coeffs.D_plus * (b_R_bdag - adag_R_a - bdb_R + aad_R)
    out += gain * coeffs.D_minus * (b_R_bdag - adag_R_a - R_bdb + R_aad)
    out += gain * coeffs.E_plus * (adag_R_bdag - bdad_R + b_R_a - ab_R)
    out += gain * coeffs.E_minus * (adag_R_bdag - R_bdad + b_R_a - R_ab)
    out += gain * coeffs.drive * (bdad_R - R_bdad - ab_R + R_ab)
    return out


def liouvillian_apply(coeffs: DerivedCoeffs, rho: DensityMatrix) -> DensityMatrix:
    """Apply the master-equation generator to a density matrix.

    Args:
        coeffs: Derived coefficients; fixed mode uses the complex D and E
        rho: Density matrix in the truncated basis

    Returns:
        d(rho)/dt as a DensityMatrix with the same dims and time

    Raises:
        DimensionMismatchError: If ``rho.data`` does not match its dims
    """
    R = _as_tensor(rho).astype(np.complex128, copy=False)
    return _from_tensor(_liouvillian_tensor(coeffs, R), t=rho.t)


def basis_state(fockcfg: FockConfig, n_a: int, n_b: int) -> DensityMatrix:
    """Projector |n_a, n_b><n_a, n_b| in the configured truncation."""
    dim_a, dim_b = fockcfg.dims
    if not (0 <= n_a < dim_a and 0 <= n_b < dim_b):
        raise DimensionMismatchError(
            f"|{n_a}, {n_b}> lies outside the truncation ({dim_a - 1}, {dim_b - 1})"
        )
    R = np.zeros((dim_a, dim_b, dim_a, dim_b), dtype=np.complex128)
    R[n_a, n_b, n_a, n_b] = 1.0
    return _from_tensor(R)


def vacuum(fockcfg: FockConfig) -> DensityMatrix:
    """Two-mode vacuum |0, 0><0, 0|."""
    return basis_state(fockcfg, 0, 0)


def default_dt(coeffs: DerivedCoeffs) -> float:
    """Rate-based RK4 step, 0.01 / max(kappa, A/B max(C+, C-, |E+|))."""
    fastest = max(
        coeffs.kappa,
        coeffs.A / coeffs.B * max(coeffs.C_plus, coeffs.C_minus, abs(coeffs.E_plus)),
    )
    return FOCK_DT_SCALE / fastest


def _boundary_population(R: np.ndarray) -> float:
    populations = np.real(np.einsum("ijij->ij", R))
    top = populations[-1, :].sum() + populations[:, -1].sum() - populations[-1, -1]
    return float(top)


def _rk4_tensor(coeffs: DerivedCoeffs, R: np.ndarray, h: float) -> np.ndarray:
    k1 = _liouvillian_tensor(coeffs, R)
    k2 = _liouvillian_tensor(coeffs, R + 0.5 * h * k1)
    k3 = _liouvillian_tensor(coeffs, R + 0.5 * h * k2)
    k4 = _liouvillian_tensor(coeffs, R + h * k3)
    return R + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve_trajectory(
    coeffs: DerivedCoeffs,
    fockcfg: FockConfig,
    rho0: DensityMatrix,
    sample_times: Iterable[float],
    dt: float | None = None,
    on_sample: Callable[[DensityMatrix], None] | None = None,
) -> list[DensityMatrix]:
    """Integrate the master equation and record the state at sample times.

    Each RK4 step is followed by re-symmetrization (rho + rho^dagger)/2; the
    largest correction is stored on the returned states. The trace is never
    renormalized, so its drift remains a diagnostic.

    Args:
        coeffs: Derived coefficients
        fockcfg: Truncation and boundary tolerance
        rho0: Initial state matching ``fockcfg.dims``
        sample_times: Nondecreasing times (>= 0) at which to record rho
        dt: Step size; defaults to ``fockcfg.dt`` then ``default_dt``
        on_sample: Optional callback invoked with every recorded state

    Returns:
        Density matrices at the sample times, in order

    Raises:
        DimensionMismatchError: If rho0 does not match the truncation
        TruncationOverflowError: If the top-layer population exceeds
            ``fockcfg.boundary_tol``
        NonFiniteError: If the state stops being finite
    """
    if (rho0.dim_a, rho0.dim_b) != fockcfg.dims:
        raise DimensionMismatchError(
            f"Initial state dims ({rho0.dim_a}, {rho0.dim_b}) differ from "
            f"truncation {fockcfg.dims}"
        )
    step = dt or fockcfg.dt or default_dt(coeffs)
    R = _as_tensor(rho0).astype(np.complex128, copy=True)
    t = 0.0
    max_correction = 0.0
    results: list[DensityMatrix] = []

    for target in sample_times:
        if target < t:
            raise ValueError(f"Sample times must be nondecreasing, got {target} < {t}")
        times = step_times(target - t, step)
        for k in range(1, len(times)):
            R = _rk4_tensor(coeffs, R, times[k] - times[k - 1])
            skew = R - _dagger(R)
            correction = 0.5 * float(np.max(np.abs(skew)))
            if correction > HERMITICITY_TOL:
                logger.warning("Hermiticity drift %.3g before symmetrization", correction)
            max_correction = max(max_correction, correction)
            R = 0.5 * (R + _dagger(R))

            now = t + float(times[k])
            if not np.all(np.isfinite(R)):
                raise NonFiniteError(f"Density matrix became non-finite at t={now:.6g}")
            boundary = _boundary_population(R)
            if boundary > fockcfg.boundary_tol:
                raise TruncationOverflowError(
                    f"Top Fock layer holds {boundary:.3g} > {fockcfg.boundary_tol:.3g} "
                    f"at t={now:.6g}; raise n_max",
                    boundary_pop=boundary,
                    t=now,
                )
        t = float(target)
        state = _from_tensor(R.copy(), t=t, max_correction=max_correction)
        results.append(state)
        if on_sample is not None:
            on_sample(state)

    if results:
        min_eig = diagnostics(results[-1]).min_eigenvalue
        if min_eig < POSITIVITY_WARN_FLOOR:
            logger.warning("Density matrix has eigenvalue %.3g at t=%.6g", min_eig, t)
    return results


def evolve(
    coeffs: DerivedCoeffs,
    fockcfg: FockConfig,
    rho0: DensityMatrix,
    t_final: float,
    dt: float | None = None,
) -> DensityMatrix:
    """Density matrix at ``t_final``; see ``evolve_trajectory``."""
    if t_final < 0.0:
        raise ValueError(f"t_final must be nonnegative, got {t_final}")
    return evolve_trajectory(coeffs, fockcfg, rho0, [t_final], dt)[-1]


def moments_of(rho: DensityMatrix) -> MomentState:
    """First and second moments by tracing against ladder operators."""
    R = _as_tensor(rho)
    return MomentState(
        t=rho.t,
        first=FirstMoments(mean_a=_trace(_a_left(R)), mean_b=_trace(_b_left(R))),
        second=SecondMoments(
            n_a=_trace(_adag_left(_a_left(R))).real,
            n_b=_trace(_bdag_left(_b_left(R))).real,
            m=_trace(_a_left(_b_left(R))),
        ),
    )


def anomalous_moments(rho: DensityMatrix) -> dict[str, complex]:
    """<a a>, <b b> and <a b^dagger>, which these dynamics keep at zero."""
    R = _as_tensor(rho)
    return {
        "aa": _trace(_a_left(_a_left(R))),
        "bb": _trace(_b_left(_b_left(R))),
        "ab_dag": _trace(_a_left(_bdag_left(R))),
    }


def pair_correlation(rho: DensityMatrix) -> float:
    """<a^dagger b^dagger b a>, the unfactorized intensity cross moment."""
    R = _as_tensor(rho)
    n_a = np.arange(rho.dim_a, dtype=np.float64)[:, None]
    n_b = np.arange(rho.dim_b, dtype=np.float64)[None, :]
    return float(np.sum(n_a * n_b * np.real(np.einsum("ijij->ij", R))))


def photon_distribution(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Marginal photon-number distributions (P_a(n), P_b(n))."""
    populations = np.real(np.einsum("ijij->ij", _as_tensor(rho)))
    return populations.sum(axis=1), populations.sum(axis=0)


def diagnostics(rho: DensityMatrix) -> FockDiagnostics:
    """Trace, Hermiticity, positivity and truncation diagnostics.

    The smallest eigenvalue may be slightly negative because the master
    equation is not of Lindblad form; it is reported, not enforced.
    """
    R = _as_tensor(rho)
    herm = 0.5 * (rho.data + rho.data.conj().T)
    return FockDiagnostics(
        trace_dev=abs(_trace(R) - 1.0),
        herm_dev=float(np.max(np.abs(rho.data - rho.data.conj().T))),
        min_eigenvalue=float(np.linalg.eigvalsh(herm)[0]),
        boundary_pop=_boundary_population(R),
    )


def write_snapshot(path: Path, rho: DensityMatrix) -> None:
    """Write rho as a little-endian binary snapshot.

    Layout: header (6-byte magic, uint32 dim_a, uint32 dim_b, float64 time)
    followed by the matrix in row-major order as complex128 pairs.
    """
    _as_tensor(rho)
    header = np.array(
        [(SNAPSHOT_MAGIC, rho.dim_a, rho.dim_b, rho.t)], dtype=SNAPSHOT_HEADER
    )
    with Path(path).open("wb") as handle:
        header.tofile(handle)
        np.ascontiguousarray(rho.data, dtype="<c16").tofile(handle)


def read_snapshot(path: Path) -> DensityMatrix:
    """Read a snapshot written by ``write_snapshot``.

    Raises:
        DimensionMismatchError: If the magic or the payload size is wrong
    """
    with Path(path).open("rb") as handle:
        header = np.fromfile(handle, dtype=SNAPSHOT_HEADER, count=1)
        if header.size != 1 or header["magic"][0] != SNAPSHOT_MAGIC:
            raise DimensionMismatchError(f"{path} is not a density-matrix snapshot")
        dim_a, dim_b = int(header["dim_a"][0]), int(header["dim_b"][0])
        dim = dim_a * dim_b
        payload = np.fromfile(handle, dtype="<c16", count=dim * dim)
    if payload.size != dim * dim:
        raise DimensionMismatchError(
            f"{path} holds {payload.size} entries, expected {dim * dim}"
        )
    return DensityMatrix(
        data=payload.reshape(dim, dim).astype(np.complex128),
        dim_a=dim_a,
        dim_b=dim_b,
        t=float(header["time"][0]),
    )
