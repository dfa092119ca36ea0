"""Tests for the coefficient algebra service functions."""

import math

import numpy as np
import pytest

from beatlaser.schemas.schema_params import FixedPhase, PhysicalParams
from beatlaser.services.service_coeffs import (
    build_params,
    coherence_factors,
    compensation_regime,
    derive_coeffs,
    initial_atom,
    noise_diffusion,
    noise_theta_sensitivity,
    threshold_margin,
)
from beatlaser.services.service_moments import drift_first
from beatlaser.utils.errors import ConfigurationError


class TestBuildParams:
    """Tests for parameter validation."""

    def test_defaults_fill_optional_fields(self):
        """gamma, Gamma default to 1, Omega and eta to 0, averaged phase."""
        params = build_params({"g": 0.2, "r_a": 10, "kappa": 0.2})

        assert params.gamma == 1.0
        assert params.Gamma == 1.0
        assert params.Omega == 0.0
        assert params.eta == 0.0
        assert params.averaged

    def test_eta_out_of_range_names_field(self):
        """eta = 2 is rejected with a message naming eta."""
        with pytest.raises(ConfigurationError, match="eta"):
            build_params({"g": 0.2, "r_a": 10, "kappa": 0.2, "eta": 2.0})

    def test_nonpositive_rate_rejected(self):
        """kappa must be strictly positive."""
        with pytest.raises(ConfigurationError, match="kappa"):
            build_params({"g": 0.2, "r_a": 10, "kappa": 0.0})

    def test_unknown_key_rejected(self):
        """Unknown parameters are configuration errors."""
        with pytest.raises(ConfigurationError):
            build_params({"g": 0.2, "r_a": 10, "kappa": 0.2, "omega": 1.0})

    def test_fixed_phase_bounds(self):
        """phi must lie in [0, 2pi)."""
        with pytest.raises(ConfigurationError, match="phi"):
            build_params(
                {
                    "g": 0.2,
                    "r_a": 10,
                    "kappa": 0.2,
                    "phase": {"mode": "fixed", "phi": 2.0 * math.pi},
                }
            )

    def test_configuration_error_is_value_error(self):
        """Callers catching ValueError still see configuration problems."""
        with pytest.raises(ValueError):
            build_params({"g": -1.0, "r_a": 10, "kappa": 0.2})


class TestDeriveCoeffs:
    """Tests for derive_coeffs at the reference parameters."""

    def test_p1_gain_and_saturation(self, p1_coeffs):
        """A = 2 r_a g^2 / gamma^2 and B = (4 + zeta^2)(1 + zeta' zeta)."""
        assert p1_coeffs.A == pytest.approx(0.8)
        assert p1_coeffs.B == pytest.approx(10.0)
        assert p1_coeffs.drive == pytest.approx(2.0)

    def test_p1_master_equation_coefficients(self, p1_coeffs):
        """C, D and E at P1."""
        assert p1_coeffs.C_plus == pytest.approx(4.0)
        assert p1_coeffs.C_minus == pytest.approx(4.0)
        assert p1_coeffs.D_plus == pytest.approx(3.0)
        assert p1_coeffs.D_minus == pytest.approx(3.0)
        assert p1_coeffs.E_plus == pytest.approx(-1.0)
        assert p1_coeffs.E_minus == pytest.approx(-1.0)

    def test_p1_drift_coefficients(self, p1_coeffs):
        """a_+ = 0.06, a_- = 0.38, b_+ = -0.04, b_- = -0.12."""
        assert p1_coeffs.a_plus == pytest.approx(0.06)
        assert p1_coeffs.a_minus == pytest.approx(0.38)
        assert p1_coeffs.b_plus == pytest.approx(-0.04)
        assert p1_coeffs.b_minus == pytest.approx(-0.12)

    def test_p1_propagator_scalars(self, p1_coeffs):
        """lambda, delta, epsilon and the normalized p, q."""
        epsilon = math.sqrt(0.0304)

        assert p1_coeffs.lambda_ == pytest.approx(0.22)
        assert p1_coeffs.delta == pytest.approx(0.16)
        assert p1_coeffs.epsilon == pytest.approx(epsilon)
        assert p1_coeffs.Z == pytest.approx(epsilon / 0.04)
        assert p1_coeffs.p == pytest.approx(0.16 / epsilon)
        assert p1_coeffs.q_plus == pytest.approx(-0.04 / epsilon)
        assert p1_coeffs.q_minus == pytest.approx(-0.12 / epsilon)

    def test_lambda_alias(self, p1_coeffs):
        """lambda is exported under its published name."""
        dumped = p1_coeffs.model_dump(by_alias=True)

        assert "lambda" in dumped
        assert dumped["lambda"] == pytest.approx(0.22)

    def test_epsilon_squared_identity(self, make_params):
        """epsilon^2 = delta^2 + b_+ b_- across parameter sets."""
        for overrides in ({"eta": 0.3}, {"Omega": 2.5}, {"kappa": 1.0, "eta": -0.7}):
            c = derive_coeffs(make_params(**overrides))
            assert c.epsilon**2 == pytest.approx(c.delta**2 + c.b_plus * c.b_minus)

    @pytest.mark.parametrize("fixed", [False, True])
    def test_epsilon_squared_identity_random_parameters(self, random_params, fixed):
        """The identity holds for 1000 random draws in either phase mode."""
        rng = np.random.default_rng(7 if fixed else 8)

        for _ in range(1000):
            c = derive_coeffs(random_params(rng, fixed=fixed))
            expected = c.delta**2 + c.b_plus * c.b_minus
            scale = abs(c.delta) ** 2 + abs(c.b_plus * c.b_minus)
            assert abs(c.epsilon**2 - expected) <= 1e-12 * max(scale, 1e-300)
            assert c.extrapolated is fixed

    def test_no_driving_kills_d_and_drive(self, make_params):
        """Omega = 0 gives D_pm = 0 and no drive term."""
        c = derive_coeffs(make_params(Omega=0.0))

        assert c.D_plus == 0
        assert c.D_minus == 0
        assert c.drive == 0.0
        assert c.B == pytest.approx(4.0)

    def test_full_inversion_has_no_coherence(self, make_params):
        """eta = 1 removes every coherence factor."""
        c = derive_coeffs(make_params(eta=1.0))

        assert c.D_plus == 0
        assert c.E_plus == pytest.approx(3.0)

    def test_imaginary_epsilon_stays_on_imaginary_axis(self, make_params):
        """Negative epsilon^2 gives a purely imaginary epsilon in averaged mode."""
        c = derive_coeffs(make_params(Omega=0.0, gamma=0.5))

        assert (c.delta**2 + c.b_plus * c.b_minus).real < 0.0
        assert c.epsilon.real == 0.0
        assert c.epsilon.imag > 0.0

    def test_vanishing_epsilon_gives_nan_ratios(self, make_params):
        """p and q are undefined when epsilon is zero."""
        c = derive_coeffs(make_params(g=0.25, r_a=8.0, kappa=0.5, Omega=0.0))

        assert c.epsilon == 0
        assert math.isnan(c.p.real)
        assert math.isnan(c.q_plus.real)
        assert math.isnan(c.q_minus.real)

    def test_fixed_phase_is_flagged_extrapolated(self, make_params):
        """Fixed phase mode produces complex, extrapolated coefficients."""
        c = derive_coeffs(make_params(phase={"mode": "fixed", "phi": 0.5}))

        assert not c.averaged
        assert c.extrapolated
        assert c.D_plus.imag != 0.0

    def test_fixed_phase_zero_matches_theta_zero(self, make_params, p1_coeffs):
        """phi = 0 and theta = 0 produce the same real coefficients."""
        c = derive_coeffs(make_params(phase={"mode": "fixed", "phi": 0.0}))

        assert c.a_plus == pytest.approx(p1_coeffs.a_plus)
        assert c.b_minus == pytest.approx(p1_coeffs.b_minus)

    def test_unvalidated_params_rejected(self, p1_params):
        """Parameters built without validation are re-checked."""
        bad = p1_params.model_copy(update={"eta": 1.5})

        with pytest.raises(ConfigurationError, match="eta"):
            derive_coeffs(bad)


class TestCoherenceFactors:
    """Tests for the coherence factors of both phase signs."""

    def test_averaged_factors_equal(self, make_params):
        """Averaging maps both signs to exp(-theta) sqrt(1 - eta^2)."""
        params = make_params(eta=0.6, phase={"mode": "averaged", "theta": 0.3})

        theta_p, theta_m = coherence_factors(params)

        assert theta_p == theta_m
        assert theta_p == pytest.approx(0.8 * math.exp(-0.3))

    def test_fixed_factors_conjugate(self, make_params):
        """Fixed phase gives conjugate factors."""
        params = make_params(phase=FixedPhase(phi=1.2).model_dump())

        theta_p, theta_m = coherence_factors(params)

        assert theta_p == pytest.approx(theta_m.conjugate())
        assert theta_p == pytest.approx(complex(math.cos(1.2), -math.sin(1.2)))


class TestThresholdMargin:
    """Tests for threshold_margin."""

    def test_p1_below_threshold(self, p1_coeffs):
        """margin = lambda - epsilon at P1."""
        assert threshold_margin(p1_coeffs) == pytest.approx(0.22 - math.sqrt(0.0304))

    def test_low_damping_crosses_threshold(self, make_params):
        """kappa = 0.1 puts P1 above threshold."""
        margin = threshold_margin(derive_coeffs(make_params(kappa=0.1)))

        assert margin == pytest.approx(-0.00436, abs=1e-5)

    def test_phase_fluctuation_crosses_threshold(self, make_params):
        """theta = 0.5 pushes P1 above threshold."""
        params = make_params(phase={"mode": "averaged", "theta": 0.5})

        assert threshold_margin(derive_coeffs(params)) == pytest.approx(
            -0.004449, abs=1e-5
        )

    def test_imaginary_epsilon_margin_is_lambda(self, make_params):
        """With imaginary epsilon the margin equals lambda."""
        c = derive_coeffs(make_params(Omega=0.0, gamma=0.5))

        assert threshold_margin(c) == pytest.approx(c.lambda_.real)

    def test_margin_is_slowest_drift_decay_random_parameters(self, random_params):
        """lambda - Re(epsilon) equals minus the leading drift eigenvalue."""
        rng = np.random.default_rng(31)

        for _ in range(1000):
            c = derive_coeffs(random_params(rng))
            scale = abs(c.lambda_) + abs(c.epsilon)
            if abs(c.epsilon) <= 1e-4 * scale:
                continue
            leading = np.max(np.linalg.eigvals(drift_first(c)).real)

            assert abs(threshold_margin(c) + leading) <= 1e-10 * scale

    def test_fixed_mode_uses_drift_eigenvalues(self, make_params, p1_coeffs):
        """At phi = 0 the eigenvalue margin equals the averaged margin."""
        c = derive_coeffs(make_params(phase={"mode": "fixed", "phi": 0.0}))

        assert threshold_margin(c) == pytest.approx(threshold_margin(p1_coeffs))


class TestNoiseDiffusion:
    """Tests for the noise correlation strengths."""

    def test_p1_values(self, p1_coeffs):
        """D_aa = 0.08 and D_ba = 0.12 at P1."""
        noise = noise_diffusion(p1_coeffs)

        assert noise.D_aa == pytest.approx(0.08)
        assert noise.D_ba == pytest.approx(0.12)

    def test_averaged_strengths_are_real(self, make_params):
        """Averaged mode produces real noise strengths."""
        noise = noise_diffusion(derive_coeffs(make_params(eta=0.4, Omega=2.0)))

        assert noise.D_aa.imag == 0.0
        assert noise.D_ba.imag == 0.0


class TestNoiseThetaSensitivity:
    """Tests for the derivative of D_ba with respect to theta."""

    def test_matches_finite_difference(self, make_params):
        """Closed form agrees with a central difference."""
        h = 1e-6
        theta = 0.4

        def d_ba(value: float) -> float:
            params = make_params(phase={"mode": "averaged", "theta": value})
            return noise_diffusion(derive_coeffs(params)).D_ba.real

        params = make_params(phase={"mode": "averaged", "theta": theta})
        numeric = (d_ba(theta + h) - d_ba(theta - h)) / (2.0 * h)

        assert noise_theta_sensitivity(params) == pytest.approx(numeric, rel=1e-6)

    @pytest.mark.parametrize(
        ("omega", "sign"),
        [(1.0, -1.0), (math.sqrt(2.0), 0.0), (2.0, 1.0)],
    )
    def test_sign_flips_at_critical_drive(self, make_params, omega, sign):
        """Negative below Omega^2 = 2 Gamma gamma, zero at it, positive above."""
        value = noise_theta_sensitivity(make_params(Omega=omega))

        if sign == 0.0:
            assert value == pytest.approx(0.0, abs=1e-15)
        else:
            assert math.copysign(1.0, value) == sign

    def test_value_is_real(self, make_params):
        """Averaged coefficients are real, so the derivative is a plain float."""
        params = make_params(eta=0.2, phase={"mode": "averaged", "theta": 0.4})
        value = noise_theta_sensitivity(params)

        assert isinstance(value, float)

    def test_fixed_mode_rejected(self, make_params):
        """The derivative is only defined for the averaged phase."""
        with pytest.raises(ConfigurationError):
            noise_theta_sensitivity(make_params(phase={"mode": "fixed", "phi": 0.1}))


class TestCompensationRegime:
    """Tests for compensation_regime."""

    @pytest.mark.parametrize(
        ("omega", "expected"),
        [(1.0, "decrease"), (math.sqrt(2.0), "neutral"), (3.0, "increase")],
    )
    def test_regimes(self, make_params, omega, expected):
        """Direction relative to Omega^2 = 2 Gamma gamma."""
        assert compensation_regime(make_params(Omega=omega)) == expected


class TestInitialAtom:
    """Tests for initial_atom."""

    def test_populations_sum_to_one(self):
        """rho_aa0 + rho_cc0 = 1 and rho_ac0 = sqrt(1 - eta^2) / 2."""
        params = PhysicalParams(g=0.2, r_a=10, kappa=0.2, eta=0.6)

        populations = initial_atom(params)

        assert populations.rho_aa0 + populations.rho_cc0 == pytest.approx(1.0)
        assert populations.rho_aa0 == pytest.approx(0.2)
        assert populations.rho_ac0 == pytest.approx(0.4)
