"""Conjugacy enclosures, endpoint tables, and the functional-equation residual."""

import numpy as np
import pytest

from circledyn import (
    ConjugacyMap,
    DegreeMismatchError,
    EndpointTable,
    conjugacy_enclosures,
    conjugacy_eval,
    conjugacy_residual,
    endpoint_table,
    eval_lift,
    homeo_lift_values,
    level_endpoints,
    linear_map,
    make_conjugated,
    mesh,
    sine_homeo,
    word_of_point,
    interval_of_word,
)


class TestConjugacyEval:
    def test_identity_pair_encloses_input(self, f06):
        enc = conjugacy_eval(f06, f06, 0.37, tol=1e-8)
        assert enc.lo <= 0.37 <= enc.hi
        assert enc.width <= 1e-8
        assert enc.tol_met

    def test_level1_endpoint_maps_exactly(self, f06, lin2):
        # forced by h(f^{-1}(0)) = g^{-1}(0) with order preserved
        enc = conjugacy_eval(f06, lin2, 0.6, tol=1e-8)
        assert (enc.lo, enc.hi) == (0.5, 0.5)

    def test_level2_endpoint_maps_exactly(self, f06, lin2):
        enc = conjugacy_eval(f06, lin2, 0.84, tol=1e-8)
        assert (enc.lo, enc.hi) == (0.75, 0.75)
        # oracle: the level-2 endpoint table pairs 0.84 with 0.75
        table = endpoint_table(f06, lin2, 2)
        j = int(np.argmin(np.abs(table.f_points - 0.84)))
        assert table.g_points[j] == 0.75

    def test_fixed_ends(self, f06, lin2):
        assert conjugacy_eval(f06, lin2, 0.0).lo == 0.0
        assert conjugacy_eval(f06, lin2, 0.0).hi == 0.0
        assert conjugacy_eval(f06, lin2, 1.0).lo == 1.0

    def test_enclosure_width_bounded_by_mesh(self, f06, lin2):
        for x in (0.1, 0.37, 0.62, 0.9):
            enc = conjugacy_eval(f06, lin2, x, tol=1e-6)
            assert enc.width <= mesh(lin2, enc.depth) + 1e-15

    def test_flagged_when_tolerance_unreachable(self, f06, lin2):
        enc = conjugacy_eval(f06, lin2, 0.37, tol=1e-10, depth_cap=4)
        assert not enc.tol_met
        assert enc.depth == 4
        assert enc.width > 1e-10  # best effort, still a sound enclosure

    def test_word_matching_semantics(self, f06, lin2):
        # the enclosure is the g-cylinder of x's f-word
        x = 0.41
        enc = conjugacy_eval(f06, lin2, x, tol=1e-3)
        word = word_of_point(f06, x, enc.depth)
        cyl = interval_of_word(lin2, word)
        assert enc.lo == pytest.approx(cyl.left, abs=1e-13)
        assert enc.hi == pytest.approx(cyl.right, abs=1e-13)

    def test_degree_mismatch(self, f06):
        with pytest.raises(DegreeMismatchError):
            conjugacy_eval(f06, linear_map(3), 0.5)

    def test_monotone_on_grid(self, f06, lin2):
        xs = np.linspace(0.0, 1.0, 257)
        lo, hi, _, _ = conjugacy_enclosures(f06, lin2, xs, tol=1e-10)
        mids = 0.5 * (lo + hi)
        assert np.all(np.diff(mids) >= 0)
        assert mids[0] == 0.0 and mids[-1] == 1.0


class TestEndpointTable:
    def test_identity_pairs(self, f06):
        table = endpoint_table(f06, f06, 6)
        assert np.array_equal(table.f_points, table.g_points)

    def test_f06_to_linear_level2(self, f06, lin2):
        table = endpoint_table(f06, lin2, 2)
        assert np.allclose(table.f_points, [0.0, 0.36, 0.6, 0.84, 1.0], atol=1e-15)
        assert np.allclose(table.g_points, [0.0, 0.25, 0.5, 0.75, 1.0], atol=1e-15)

    def test_swap_gives_inverse_relation(self, f06, lin2):
        fwd = endpoint_table(f06, lin2, 4)
        back = endpoint_table(lin2, f06, 4)
        assert np.array_equal(fwd.f_points, back.g_points)
        assert np.array_equal(fwd.g_points, back.f_points)

    def test_rejects_non_monotone_data(self):
        with pytest.raises(ValueError):
            EndpointTable(
                level=1,
                f_points=np.asarray([0.0, 0.5, 0.5, 1.0]),
                g_points=np.asarray([0.0, 0.3, 0.6, 1.0]),
            )

    def test_word_equivariance(self, f06, lin2):
        # h maps I_w(f) endpoints onto I_w(g) endpoints, tested through eval
        table = endpoint_table(f06, lin2, 5)
        lo, hi, _, _ = conjugacy_enclosures(f06, lin2, table.f_points, tol=1e-9)
        assert np.max(np.abs(lo - table.g_points)) <= 1e-12
        assert np.max(np.abs(hi - table.g_points)) <= 1e-12


class TestFunctionalEquation:
    def test_identity_residual(self, f06):
        report = conjugacy_residual(f06, f06, 128, tol=1e-8)
        assert report.max_residual <= 2e-8

    def test_f06_linear_residual(self, f06, lin2):
        report = conjugacy_residual(f06, lin2, 1024, tol=1e-8)
        assert report.max_residual <= 1e-6
        assert report.tol_met_all

    def test_equation_at_endpoints(self, f06, lin2):
        # transported dynamics: g(h(e)) equals h(f(e)) at level-n f-endpoints
        table_n = endpoint_table(f06, lin2, 4)
        table_prev = endpoint_table(f06, lin2, 3)
        for j in range(len(table_n) - 1):
            e, e_img = table_n.f_points[j], table_n.g_points[j]
            fe = eval_lift(f06, float(e)) % 1.0
            ge = eval_lift(lin2, float(e_img)) % 1.0
            k = int(np.argmin(np.abs(table_prev.f_points - fe)))
            assert abs(table_prev.f_points[k] - fe) < 1e-10
            assert ge == pytest.approx(float(table_prev.g_points[k]), abs=1e-10)

    def test_constructed_pair_recovers_homeo(self, lin2):
        homeo = sine_homeo(0.5)
        f = make_conjugated(lin2, homeo)
        table = endpoint_table(f, lin2, 10)
        expected = homeo_lift_values(homeo, table.f_points)
        assert float(np.max(np.abs(table.g_points - expected))) <= 1e-6


class TestConjugacyMap:
    def test_lift_periodicity(self, f06, lin2):
        h = ConjugacyMap(f06, lin2, tol=1e-10)
        for x in (0.21, 0.73):
            assert h(x + 1.0) == pytest.approx(h(x) + 1.0, abs=1e-12)
            assert h(x - 2.0) == pytest.approx(h(x) - 2.0, abs=1e-12)

    def test_batch_matches_scalar(self, f06, lin2):
        h = ConjugacyMap(f06, lin2, tol=1e-10)
        xs = np.asarray([0.0, 0.125, 0.6, 0.84, 0.97])
        batch = h.lift_values(xs)
        singles = [h(float(x)) for x in xs]
        assert np.allclose(batch, singles, atol=0)
