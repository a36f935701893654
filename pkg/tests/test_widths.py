import json

import numpy as np
import pytest
from scipy.special import ellipe

from geolab.errors import SeedBudgetExhausted
from geolab.surfaces import make_mk, make_sphere
from geolab.widths import (
    WidthBound,
    _multiplicity_attribution,
    ellipsoid_experiment,
    guth_p_sweepout_bound,
    level_circle_sweepout,
    mk_multiplicity_experiment,
    plane_ellipse_circumference,
    round_sphere_width,
)


class TestSweepout:
    def test_mk_level_circles_max_at_equator(self, mk4):
        sw = level_circle_sweepout(mk4, 512)
        assert abs(sw.max_mass - 2 * np.pi) < 1e-6
        assert sw.argmax_t == pytest.approx(0.5)
        # endpoint masses degenerate toward the poles
        assert sw.masses[0] == 0.0 and sw.masses[-1] == 0.0
        # continuity on the grid: jumps are O(grid spacing)
        assert np.max(np.abs(np.diff(sw.masses))) < 0.2

    def test_mu2_sweepout(self):
        mk = make_mk(9.0, 2.0)
        sw = level_circle_sweepout(mk, 257)
        assert abs(sw.max_mass - 2 * np.pi) < 1e-6

    def test_round_sphere_latitudes(self, sphere):
        sw = level_circle_sweepout(sphere, 257)
        assert abs(sw.max_mass - 2 * np.pi) < 1e-6

    def test_guth_bound_linear_in_p(self, mk4):
        sw = level_circle_sweepout(mk4, 257)
        b1 = guth_p_sweepout_bound(sw, 1)
        for p in range(2, 6):
            bp = guth_p_sweepout_bound(sw, p)
            assert bp.upper_bound == pytest.approx(p * b1.upper_bound, abs=1e-12)
        assert b1.upper_bound == pytest.approx(sw.max_mass, abs=1e-12)

    def test_grid_search_oracle_never_exceeds(self, mk4):
        sw = level_circle_sweepout(mk4, 257)
        guth_p_sweepout_bound(sw, 2, grid_check=20)  # raises on violation
        guth_p_sweepout_bound(sw, 3, grid_check=12)

    def test_round_sphere_width_table(self):
        assert round_sphere_width(1) == pytest.approx(2 * np.pi)
        assert round_sphere_width(3) == pytest.approx(2 * np.pi)
        assert round_sphere_width(9) == pytest.approx(6 * np.pi)
        for p in range(1, 17):
            assert round_sphere_width(p) == pytest.approx(
                2 * np.pi * int(np.sqrt(p))
            )


class TestEllipseOracle:
    def test_quadrature_matches_elliptic_integral(self):
        b, c = 1.0, 0.9806
        # C = 4 max(b,c) E(m), m = 1 - (min/max)^2
        m = 1 - (c / b) ** 2
        assert plane_ellipse_circumference(b, c) == pytest.approx(
            4 * b * ellipe(m), abs=1e-10
        )


class TestEllipsoidExperiment:
    @pytest.fixture(scope="class")
    def report(self):
        return ellipsoid_experiment(0.96, 1.0, 1.04)

    def test_three_geodesics_found(self, report):
        assert len(report["geodesics"]) == 3
        lengths = [d["length"] for d in report["geodesics"]]
        assert len(set(np.round(lengths, 6))) == 3  # distinct

    def test_lengths_match_quadrature(self, report):
        for d in report["geodesics"]:
            assert d["length_error"] <= 1e-6

    def test_nondegenerate_up_to_cover_3(self, report):
        for d in report["geodesics"]:
            for m in (1, 2, 3):
                assert d["spectra_by_cover"][m]["nullity"] == 0

    def test_principal_indices(self, report):
        # classical picture: the three principal ellipses have index 1, 2, 3
        indices = [d["spectra_by_cover"][1]["index"] for d in report["geodesics"]]
        assert sorted(indices) == [1, 2, 3]

    def test_attribution_not_all_ones(self, report):
        att = report["attribution"]
        assert att["all_ones_admissible"] is False
        assert att["admissible"], "some representation must be admissible"

    def test_validation(self):
        with pytest.raises(ValueError):
            ellipsoid_experiment(1.04, 1.0, 0.96)
        with pytest.raises(ValueError):
            ellipsoid_experiment(0.5, 1.0, 1.04)


class TestAttributionChecker:
    def test_round_lengths_p4(self):
        att = _multiplicity_attribution([2 * np.pi] * 3, 4, window=0.05)
        assert att["all_ones_admissible"] is False
        # (1,1,0)-type sums are admissible, so >= 2 is not forced at p=4
        assert att["some_multiplicity_ge2_forced"] is False

    def test_pigeonhole_forcing_p16(self):
        att = _multiplicity_attribution([2 * np.pi] * 3, 16, window=0.05)
        # floor(sqrt(16)) = 4 copies over at most 3 curves forces some m >= 2
        assert att["some_multiplicity_ge2_forced"] is True


class TestMkExperiment:
    @pytest.fixture(scope="class")
    def report(self):
        return mk_multiplicity_experiment(100.0, 1.0, n_seeds=40, seed=11)

    def test_finds_gamma0(self, report):
        assert report["n_classes"] >= 1
        assert report["properties"]["unique_short_class_is_gamma0"]

    def test_all_intersect_equator(self, report):
        assert report["properties"]["all_intersect_equator"]

    def test_calabi_cao_simplicity(self, report):
        assert report["properties"]["shortest_is_simple"]

    def test_gamma0_spectrum(self, report):
        g0 = [r for r in report["found"] if r["is_gamma0"]][0]
        assert g0["index"] == 1 and g0["nullity"] == 0

    def test_width_table(self, report):
        for row in report["width_bounds"]:
            assert row["upper_bound"] == pytest.approx(
                2 * np.pi * row["p"], abs=1e-6
            )
            assert abs(row["gap"]) < 1e-6

    def test_determinism(self):
        a = mk_multiplicity_experiment(100.0, 1.0, n_seeds=12, seed=3, spectra=False)
        b = mk_multiplicity_experiment(100.0, 1.0, n_seeds=12, seed=3, spectra=False)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_json_serializable(self, report):
        json.dumps(report, sort_keys=True)
