"""Tests for the nonclassicality quantifiers."""

import math

import numpy as np
import pytest

from beatlaser.schemas.schema_moments import FirstMoments, SecondMoments
from beatlaser.services.service_fock import (
    evolve,
    moments_of,
    pair_correlation,
    vacuum,
)
from beatlaser.services.service_quant import (
    covariance_matrix,
    dgcz_witness,
    gaussian_g2,
    log_negativity,
    nonclassicality_report,
    quadrature_variances,
)
from beatlaser.utils.errors import DegenerateIntensityError, UnphysicalCovarianceError
from tests.conftest import P1_STEADY_M, P1_STEADY_N_A, P1_STEADY_N_B

VACUUM = SecondMoments()
P1_STEADY = SecondMoments(n_a=P1_STEADY_N_A, n_b=P1_STEADY_N_B, m=P1_STEADY_M)


def _two_mode_squeezed(n: float) -> SecondMoments:
    """Two-mode squeezed vacuum with n photons per mode."""
    return SecondMoments(n_a=n, n_b=n, m=math.sqrt(n * (n + 1.0)))


class TestVacuum:
    """The vacuum sits exactly on every classical boundary."""

    def test_quadrature_variances(self):
        """Both combined variances equal 1."""
        assert quadrature_variances(VACUUM) == pytest.approx((1.0, 1.0))

    def test_dgcz_witness(self):
        """S = 2."""
        assert dgcz_witness(VACUUM) == pytest.approx(2.0)

    def test_log_negativity(self):
        """No entanglement."""
        assert log_negativity(VACUUM) == 0.0

    def test_covariance_is_identity(self):
        """Quadratures are scaled so the vacuum covariance is the identity."""
        assert np.allclose(covariance_matrix(VACUUM), np.eye(4))


class TestP1SteadyState:
    """Reference values of the P1 steady state."""

    def test_quadrature_variance(self):
        """var_minus = 107/99, above the vacuum level."""
        var_minus, var_plus = quadrature_variances(P1_STEADY)

        assert var_minus == pytest.approx(107.0 / 99.0)
        assert var_plus == pytest.approx(1.0 + 122.0 / 99.0 + 114.0 / 99.0)

    def test_dgcz_witness(self):
        """S = 214/99 does not certify entanglement."""
        assert dgcz_witness(P1_STEADY) == pytest.approx(214.0 / 99.0)

    def test_log_negativity(self):
        """The partial transpose still finds entanglement."""
        assert log_negativity(P1_STEADY) == pytest.approx(0.2358, abs=1e-4)

    def test_g2_and_cauchy_schwarz(self):
        """g2_cross = 569/208 and the Cauchy-Schwarz ratio exceeds 1."""
        g2_cross, cs_ratio = gaussian_g2(P1_STEADY)

        assert g2_cross == pytest.approx(569.0 / 208.0)
        assert cs_ratio == pytest.approx((569.0 / 208.0) ** 2 / 4.0)
        assert cs_ratio > 1.0


class TestTwoModeSqueezedVacuum:
    """Pure two-mode squeezing, where every witness fires."""

    @pytest.mark.parametrize("n", [0.1, 0.5, 1.0])
    def test_log_negativity_closed_form(self, n):
        """E_N = -ln(1 + 2n - 2 sqrt(n(n+1)))."""
        expected = -math.log(1.0 + 2.0 * n - 2.0 * math.sqrt(n * (n + 1.0)))

        assert log_negativity(_two_mode_squeezed(n)) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("n", [0.1, 0.5, 1.0])
    def test_witness_implies_negativity(self, n):
        """S < 2 comes with E_N > 0."""
        second = _two_mode_squeezed(n)

        assert dgcz_witness(second) < 2.0
        assert log_negativity(second) > 0.0

    def test_witness_implies_negativity_random_states(self):
        """Across random physical moments every S < 2 has E_N > 0."""
        rng = np.random.default_rng(2718)
        certified = 0

        for _ in range(2000):
            n_a = float(rng.uniform(0.0, 3.0))
            n_b = n_a * float(rng.uniform(0.5, 1.5))
            bound = math.sqrt(min(n_a, n_b) * (1.0 + max(n_a, n_b)))
            phase = float(rng.uniform(0.0, 2.0 * math.pi))
            modulus = bound * float(rng.uniform(0.0, 0.999))
            m = complex(modulus * math.cos(phase), modulus * math.sin(phase))
            second = SecondMoments(n_a=n_a, n_b=n_b, m=m)

            e_n = log_negativity(second)
            if dgcz_witness(second) < 2.0 - 1e-6:
                certified += 1
                assert e_n > 0.0

        assert certified > 100

    def test_squeezed_variance(self):
        """var_minus falls below the vacuum level."""
        var_minus, _ = quadrature_variances(_two_mode_squeezed(1.0))

        assert var_minus == pytest.approx(3.0 - 2.0 * math.sqrt(2.0))

    def test_witness_is_phase_independent(self):
        """S uses |m| and so ignores the phase of the correlation."""
        rotated = SecondMoments(n_a=1.0, n_b=1.0, m=1j * math.sqrt(2.0))

        assert dgcz_witness(rotated) == pytest.approx(
            dgcz_witness(_two_mode_squeezed(1.0))
        )


class TestMeanSubtraction:
    """Coherent amplitudes do not count as fluctuations."""

    def test_coherent_state_is_vacuum_like(self):
        """A coherent state gives the vacuum values after subtraction."""
        first = FirstMoments(mean_a=1.5 - 0.5j, mean_b=0.3j)
        second = SecondMoments(
            n_a=abs(first.mean_a) ** 2,
            n_b=abs(first.mean_b) ** 2,
            m=first.mean_a * first.mean_b,
        )

        assert quadrature_variances(second, first) == pytest.approx((1.0, 1.0))
        assert dgcz_witness(second, first) == pytest.approx(2.0)
        assert log_negativity(second, first) == pytest.approx(0.0, abs=1e-6)


class TestErrors:
    """Tests for unphysical and degenerate inputs."""

    def test_unphysical_correlation_rejected(self):
        """|m|^2 > n_a n_b + min(n_a, n_b) is not a quantum state."""
        with pytest.raises(UnphysicalCovarianceError):
            log_negativity(SecondMoments(n_a=0.0, n_b=0.0, m=0.5))

    def test_g2_needs_light(self):
        """An empty mode leaves g2 undefined."""
        with pytest.raises(DegenerateIntensityError):
            gaussian_g2(SecondMoments(n_a=1.0, n_b=0.0, m=0.0))


class TestReport:
    """Tests for nonclassicality_report."""

    def test_p1_report(self):
        """Every field at the P1 steady state."""
        report = nonclassicality_report(P1_STEADY)

        assert report.n_total == pytest.approx(122.0 / 99.0)
        assert report.var_minus == pytest.approx(107.0 / 99.0)
        assert report.dgcz == pytest.approx(214.0 / 99.0)
        assert report.log_neg == pytest.approx(0.2358, abs=1e-4)
        assert report.g2_cross == pytest.approx(569.0 / 208.0)

    def test_empty_mode_has_no_g2(self):
        """g2 fields are None instead of raising."""
        report = nonclassicality_report(SecondMoments(n_a=1.0, n_b=0.0, m=0.0))

        assert report.g2_cross is None
        assert report.cs_ratio is None
        assert report.log_neg == 0.0


@pytest.mark.slow
class TestGaussianFactorization:
    """The Gaussian g2 formula against the full density matrix."""

    def test_pair_correlation_factorizes(self, p1_coeffs, small_fock):
        """<a+ b+ b a> of the evolved P1 state is n_a n_b + |m|^2."""
        rho = evolve(p1_coeffs, small_fock, vacuum(small_fock), 10.0)
        second = moments_of(rho).second

        g2_cross, _ = gaussian_g2(second)

        assert pair_correlation(rho) == pytest.approx(
            second.n_a * second.n_b + abs(second.m) ** 2, abs=5e-3
        )
        assert pair_correlation(rho) / (second.n_a * second.n_b) == pytest.approx(
            g2_cross, rel=2e-2
        )
