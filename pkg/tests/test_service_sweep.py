"""Tests for steady-state rows and parameter sweeps."""

import math

import numpy as np
import pandas as pd
import pytest

from beatlaser.config.column_mappings import STEADY_COLUMNS
from beatlaser.schemas.schema_run import SweepConfig
from beatlaser.services.service_sweep import (
    apply_axis_value,
    grid_points,
    run_sweep,
    steady_row,
)
from beatlaser.utils.errors import ConfigurationError
from tests.conftest import P1_STEADY_M, P1_STEADY_N_A, P1_STEADY_N_B


def _sweep(*axes: tuple[str, float, float, int]) -> SweepConfig:
    return SweepConfig.model_validate(
        {
            "axes": [
                {"variable": v, "start": start, "stop": stop, "steps": steps}
                for v, start, stop, steps in axes
            ]
        }
    )


class TestApplyAxisValue:
    """Tests for apply_axis_value."""

    def test_plain_parameter(self, p1_params):
        """Ordinary fields are replaced in a copy."""
        point = apply_axis_value(p1_params, "kappa", 0.5)

        assert point.kappa == 0.5
        assert p1_params.kappa == 0.2

    def test_phase_axes_select_mode(self, p1_params):
        """theta selects averaged mode, phi selects fixed mode."""
        assert apply_axis_value(p1_params, "theta", 0.3).phase.theta == 0.3
        assert apply_axis_value(p1_params, "phi", 1.2).averaged is False

    def test_out_of_bounds_value(self, p1_params):
        """|eta| > 1 is a configuration error."""
        with pytest.raises(ConfigurationError):
            apply_axis_value(p1_params, "eta", 1.5)


class TestSteadyRow:
    """Tests for steady_row."""

    def test_p1_row(self, p1_params):
        """Exact moments and an ok status at P1."""
        row = steady_row(p1_params)

        assert list(row) == STEADY_COLUMNS
        assert row["n_a"] == pytest.approx(P1_STEADY_N_A)
        assert row["n_b"] == pytest.approx(P1_STEADY_N_B)
        assert row["re_m"] == pytest.approx(P1_STEADY_M)
        assert row["S_dgcz"] == pytest.approx(214.0 / 99.0)
        assert row["margin"] == pytest.approx(0.22 - math.sqrt(0.0304))
        assert row["status"] == "ok"
        assert math.isnan(row["phi"])

    def test_unstable_row(self, make_params):
        """Above threshold the row is kept with NaN moments."""
        row = steady_row(make_params(kappa=0.1))

        assert row["status"] == "unstable"
        assert row["margin"] < 0.0
        assert math.isnan(row["n_a"])
        assert math.isnan(row["log_neg"])

    def test_fixed_mode_row(self, make_params):
        """A locked phase is flagged extrapolated and has no theta derivative."""
        row = steady_row(make_params(phase={"mode": "fixed", "phi": 0.7}))

        assert row["extrapolated"] is True
        assert row["phi"] == 0.7
        assert math.isnan(row["theta"])
        assert math.isnan(row["dD_ba_dtheta"])


class TestGridPoints:
    """Tests for grid_points."""

    def test_first_axis_is_outermost(self, p1_params):
        """Two-axis grids iterate the second axis fastest."""
        sweep = _sweep(("eta", -0.5, 0.5, 2), ("kappa", 0.2, 0.4, 3))

        points = grid_points(p1_params, sweep)

        assert [p.eta for p in points] == [-0.5, -0.5, -0.5, 0.5, 0.5, 0.5]
        assert [p.kappa for p in points] == pytest.approx([0.2, 0.3, 0.4] * 2)

    def test_grid_leaving_domain_raises(self, p1_params):
        """A grid reaching eta = 2 is rejected as a whole."""
        with pytest.raises(ConfigurationError):
            grid_points(p1_params, _sweep(("eta", 0.0, 2.0, 3)))


class TestRunSweep:
    """Tests for run_sweep."""

    def test_unstable_points_are_flagged(self, p1_params):
        """kappa = 0.1 is above threshold, 0.2 and 0.3 are below."""
        table = run_sweep(p1_params, _sweep(("kappa", 0.1, 0.3, 3)))

        assert list(table.columns) == STEADY_COLUMNS
        assert table["status"].tolist() == ["unstable", "ok", "ok"]
        assert table["kappa"].tolist() == pytest.approx([0.1, 0.2, 0.3])

    @pytest.mark.parametrize("eta", [-1.0, 1.0])
    def test_theta_is_irrelevant_at_full_population(self, make_params, eta):
        """Without an initial coherence the phase fluctuation changes nothing."""
        table = run_sweep(make_params(eta=eta), _sweep(("theta", 0.0, 2.0, 5)))

        for column in ("margin", "n_a", "n_b", "re_m"):
            values = table[column].to_numpy(dtype=float)
            assert np.allclose(values, values[0], equal_nan=True, rtol=1e-12)

    def test_noise_sensitivity_vanishes_at_critical_drive(self, make_params):
        """At Omega^2 = 2 Gamma gamma the theta derivative of D_ba is zero."""
        params = make_params(Omega=math.sqrt(2.0), eta=0.3)

        table = run_sweep(params, _sweep(("theta", 0.0, 1.0, 4)))

        assert np.max(np.abs(table["dD_ba_dtheta"])) < 1e-12

    def test_phi_sweep_is_extrapolated(self, p1_params):
        """Fixed-phase grids fill phi and flag every row."""
        table = run_sweep(p1_params, _sweep(("phi", 0.0, 3.0, 4)))

        assert table["phi"].tolist() == pytest.approx([0.0, 1.0, 2.0, 3.0])
        assert table["extrapolated"].all()
        assert table["theta"].isna().all()

    def test_undriven_eta_theta_grid(self, make_params):
        """Without driving the (eta, theta) surface is complete and flagged."""
        table = run_sweep(
            make_params(Omega=0.0), _sweep(("eta", -1.0, 1.0, 3), ("theta", 0.0, 1.0, 2))
        )

        assert list(table.columns) == STEADY_COLUMNS
        assert table["eta"].tolist() == pytest.approx([-1.0, -1.0, 0.0, 0.0, 1.0, 1.0])
        assert table["theta"].tolist() == pytest.approx([0.0, 1.0] * 3)
        assert table["status"].tolist() == [
            "unstable",
            "unstable",
            "ok",
            "unstable",
            "ok",
            "ok",
        ]
        stable = table["status"] == "ok"
        for column in ("S_dgcz", "var_minus"):
            assert np.isfinite(table.loc[stable, column]).all()
            assert table.loc[~stable, column].isna().all()
        assert (table["dD_ba_dtheta"] <= 0.0).all()

    def test_result_independent_of_workers(self, p1_params):
        """Thread count does not change the table."""
        sweep = _sweep(("eta", -0.4, 0.4, 3), ("Omega", 0.5, 1.5, 3))

        serial = run_sweep(p1_params, sweep, max_workers=1)
        parallel = run_sweep(p1_params, sweep, max_workers=4)

        pd.testing.assert_frame_equal(serial, parallel)
