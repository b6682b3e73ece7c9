"""Cylinder intervals, itineraries, level enumeration, and geometric constants."""

import numpy as np
import pytest

from circledyn import (
    CellCapExceeded,
    DepthCapExceeded,
    InvalidMapError,
    Word,
    bounded_geometry_constant,
    cylinder_lengths,
    drop_last,
    enumerate_level,
    interval_of_word,
    left_shift,
    level_endpoints,
    mesh,
    smooth_sine_map,
    verify_markov,
    word_of_point,
)
from _oracles import pl_cylinder, pl_word_by_scan


class TestWord:
    def test_text_roundtrip(self):
        assert Word.from_text("012").symbols == (0, 1, 2)
        assert Word.from_text("012").to_text() == "012"
        assert Word.from_text("").symbols == ()
        assert Word.from_text("0-11-3").symbols == (0, 11, 3)

    def test_shifts(self):
        assert left_shift(Word.from_text("012")) == Word.from_text("12")
        assert drop_last(Word.from_text("012")) == Word.from_text("01")
        assert left_shift(Word.from_text("0")) == Word(())
        assert drop_last(Word.from_text("0")) == Word(())

    def test_shift_of_empty_word_fails(self):
        with pytest.raises(ValueError):
            left_shift(Word(()))
        with pytest.raises(ValueError):
            drop_last(Word(()))

    def test_level(self):
        assert Word(()).level == 0
        assert Word((0, 1, 1)).level == 3


class TestIntervalOfWord:
    def test_linear_dyadic(self, lin2):
        cyl = interval_of_word(lin2, Word.from_text("01"))
        assert (cyl.left, cyl.right) == (0.25, 0.5)

    def test_f06(self, f06):
        cyl = interval_of_word(f06, Word.from_text("01"))
        assert cyl.left == pytest.approx(0.36, abs=1e-15)
        assert cyl.right == pytest.approx(0.6, abs=1e-15)
        assert cyl.length == pytest.approx(0.24, abs=1e-15)

    def test_empty_word_is_unit_interval(self, f06, smooth05):
        for spec in (f06, smooth05):
            cyl = interval_of_word(spec, Word(()))
            assert (cyl.left, cyl.right) == (0.0, 1.0)

    def test_matches_closed_form_oracle(self, f09):
        for text in ("0", "1", "10", "011", "1101"):
            cyl = interval_of_word(f09, Word.from_text(text))
            a, b = pl_cylinder([0.9], tuple(int(c) for c in text))
            assert cyl.left == pytest.approx(a, abs=1e-13)
            assert cyl.right == pytest.approx(b, abs=1e-13)

    def test_symbol_out_of_range(self, f06):
        with pytest.raises(ValueError):
            interval_of_word(f06, Word((0, 2)))

    def test_depth_cap(self, f06):
        with pytest.raises(DepthCapExceeded):
            interval_of_word(f06, Word((0,) * 61))

    def test_deep_word_stays_accurate(self, f06):
        cyl = interval_of_word(f06, Word((0,) * 40))
        assert cyl.left == 0.0
        assert cyl.right == pytest.approx(0.6**40, rel=1e-12)
        assert cyl.endpoint_radius < 1e-12


class TestWordOfPoint:
    def test_linear_binary_expansion(self, lin2):
        assert word_of_point(lin2, 0.3, 2) == Word.from_text("01")

    def test_f06_example(self, f06):
        # 0.5 lies in [0.36, 0.6)
        assert word_of_point(f06, 0.5, 2) == Word.from_text("01")

    def test_fixed_point_all_zeros(self, f06, smooth05):
        for spec in (f06, smooth05):
            assert word_of_point(spec, 0.0, 6) == Word((0,) * 6)

    def test_tie_break_right(self, f06):
        # 0.6 is shared by [0.36, 0.6] and [0.6, 0.84]; the right cylinder wins
        assert word_of_point(f06, 0.6, 1) == Word.from_text("1")
        assert word_of_point(f06, 0.6, 2) == Word.from_text("10")

    def test_matches_membership_scan(self, f09):
        for x in (0.05, 0.3141, 0.81, 0.9, 0.95):
            for n in (1, 2, 3):
                got = word_of_point(f09, x, n)
                assert got.symbols == pl_word_by_scan([0.9], x, n)

    def test_roundtrip_through_interval(self, f06, smooth05):
        for spec in (f06, smooth05):
            for text in ("0", "11", "010", "1011"):
                word = Word.from_text(text)
                cyl = interval_of_word(spec, word)
                mid = 0.5 * (cyl.left + cyl.right)
                assert word_of_point(spec, mid, word.level) == word

    def test_domain_check(self, f06):
        with pytest.raises(ValueError):
            word_of_point(f06, 1.0, 3)


class TestEnumerateLevel:
    def test_linear_level3(self, lin2):
        cells = enumerate_level(lin2, 3)
        ends = [c.left for c in cells] + [cells[-1].right]
        assert ends == [k / 8 for k in range(9)]
        assert [c.word.to_text() for c in cells[:3]] == ["000", "001", "010"]

    def test_f06_level1(self, f06):
        cells = enumerate_level(f06, 1)
        assert [(c.left, c.right) for c in cells] == [(0.0, 0.6), (0.6, 1.0)]

    def test_f06_level2_endpoints(self, f06):
        ends = level_endpoints(f06, 2)
        assert np.allclose(ends, [0.0, 0.36, 0.6, 0.84, 1.0], atol=1e-15)

    def test_neighbors_share_endpoints_exactly(self, smooth05):
        cells = enumerate_level(smooth05, 6)
        for a, b in zip(cells, cells[1:]):
            assert a.right == b.left

    def test_cell_cap(self, lin2):
        with pytest.raises(CellCapExceeded):
            enumerate_level(lin2, 8, cell_cap=100)

    def test_word_level_agreement(self, f06):
        for cyl in enumerate_level(f06, 3):
            direct = interval_of_word(f06, cyl.word)
            assert direct.left == cyl.left  # identical inverse-branch chains
            assert direct.right == pytest.approx(cyl.right, abs=1e-13)


class TestGeometricConstants:
    def test_linear_constant_is_degree(self, lin2):
        assert bounded_geometry_constant(lin2, 6) == pytest.approx(2.0, abs=1e-12)

    def test_f06_constant(self, f06):
        # ratios take only the values {1/0.6, 1/0.4}
        assert bounded_geometry_constant(f06, 8) == pytest.approx(2.5, abs=1e-9)

    def test_f09_constant(self, f09):
        # 1/(1 - 0.9); the thin cylinders at level 8 cost some float accuracy
        assert bounded_geometry_constant(f09, 8) == pytest.approx(10.0, abs=1e-6)

    def test_mesh_linear(self, lin2):
        assert mesh(lin2, 5) == pytest.approx(2.0**-5, abs=1e-15)

    def test_mesh_f06(self, f06):
        assert mesh(f06, 3) == pytest.approx(0.216, abs=1e-15)

    def test_mesh_ratio_bounded_by_max_branch(self, f06):
        meshes = [mesh(f06, n) for n in range(1, 11)]
        for a, b in zip(meshes, meshes[1:]):
            assert b / a <= 0.6 + 1e-12


class TestVerifyMarkov:
    def test_linear_level10(self, lin2):
        report = verify_markov(lin2, 10, tol=1e-9)
        assert report.ok
        assert report.cell_count == 1024

    def test_f06_level10(self, f06):
        report = verify_markov(f06, 10, tol=1e-9)
        assert report.ok
        assert report.max_forward_error <= 1e-9

    def test_smooth_level8(self, smooth05):
        assert verify_markov(smooth05, 8, tol=1e-9).ok

    def test_invalid_map_raises_before_check(self):
        with pytest.raises(InvalidMapError):
            verify_markov(smooth_sine_map(2, 2.5), 4)


class TestPartitionInvariants:
    def test_refinement_and_union(self, f06, smooth05):
        for spec in (f06, smooth05):
            parent = level_endpoints(spec, 4)
            child = level_endpoints(spec, 5)
            # parent endpoints are a subset of child endpoints (bit-exact)
            assert np.array_equal(child[:: spec.degree], parent)

    def test_dynamics_relation(self, f06):
        # the lift maps each level-n cylinder onto the left-shifted word's cylinder
        n = 5
        ends = level_endpoints(f06, n)
        prev = level_endpoints(f06, n - 1)
        idx = np.arange(2**n)
        from circledyn import lift_values

        image = lift_values(f06, ends[:-1]) - idx // 2 ** (n - 1)
        assert np.max(np.abs(image - prev[:-1][idx % 2 ** (n - 1)])) < 1e-12

    def test_lengths_sum_to_one(self, f06, smooth05):
        for spec in (f06, smooth05):
            for n in (3, 6, 9):
                lengths = cylinder_lengths(spec, n)
                assert abs(float(np.sum(lengths)) - 1.0) <= 2**n * 1e-12
