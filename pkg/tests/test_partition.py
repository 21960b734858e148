import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bfpm.core import PartitionClass, PartitionMatrix
from bfpm.errors import DataError
from bfpm.partition import (
    assign_static,
    cap_to_unit_sum,
    class_hierarchy_check,
    crossing_line_blocks,
    divisible_demo,
    generate_crossing_lines,
    static_membership,
    validate_partition,
)

from generators import BUILDERS, break_class

ALL = {PartitionClass.CRISP, PartitionClass.FUZZY, PartitionClass.POSSIBILISTIC, PartitionClass.BFPM}

# worked crossing-lines example: lines x2 = 0 (A) and x1 = 0 (B)
D1 = [[0, 0, 0, 0, 0], [2, 1, 0, 1, 2]]
D2 = [[2, 1, 0, 1, 2], [0, 0, 0, 0, 0]]
U_FUZZY_A = [[1.0, 0.5, 0.5, 0.5, 1.0], [0.0, 0.5, 0.5, 0.5, 0.0]]
U_FUZZY_B = [[0.0, 0.5, 0.5, 0.5, 0.0], [1.0, 0.5, 0.5, 0.5, 1.0]]
U_BFPM_A = [[1.0, 1.0, 1.0, 1.0, 1.0], [0.0, 0.5, 1.0, 0.5, 0.0]]
U_BFPM_B = [[0.0, 0.5, 1.0, 0.5, 0.0], [1.0, 1.0, 1.0, 1.0, 1.0]]
U_CRISP_A = [[1.0] * 5, [0.0] * 5]
U_CRISP_B = [[0.0] * 5, [1.0, 1.0, 0.0, 1.0, 1.0]]


def pm(u, cls):
    return PartitionMatrix(np.asarray(u, dtype=float), cls)


class TestValidatePartition:
    def test_fuzzy_worked_matrix(self):
        assert validate_partition(pm(U_FUZZY_A, "fuzzy")).satisfied

    def test_bfpm_origin_column(self):
        u = pm(U_BFPM_A, "bfpm")
        assert validate_partition(u).satisfied
        report = validate_partition(u, "fuzzy")
        assert not report.satisfied
        origin = [v for v in report.violations if v.constraint == "column_sum"]
        assert [(v.obj, v.value) for v in origin] == [(1, 1.5), (2, 2.0), (3, 1.5)]

    def test_zero_column_breaks_every_class(self):
        u = pm([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], "bfpm")
        for cls in ALL:
            assert not validate_partition(u, cls).satisfied, cls

    def test_report_consistency(self):
        report = validate_partition(pm([[0.3, 1.0], [0.3, 0.0]], "crisp"))
        assert report.satisfied is (len(report.violations) == 0)
        assert {v.constraint for v in report.violations} == {"binary", "column_sum"}

    def test_tolerance(self):
        u = pm([[0.5 + 1e-12, 1.0], [0.5, 0.0]], "fuzzy")
        assert validate_partition(u).satisfied
        assert not validate_partition(u, tol=0.0).satisfied

    def test_negative_tolerance(self):
        with pytest.raises(ValueError):
            validate_partition(pm([[1.0]], "fuzzy"), tol=-1.0)


class TestHierarchy:
    def test_crisp_is_everything(self):
        assert class_hierarchy_check(pm([[1, 0], [0, 1]], "crisp")) == ALL

    def test_uniform(self):
        u = pm(np.full((3, 4), 1 / 3), "fuzzy")
        assert class_hierarchy_check(u) == ALL - {PartitionClass.CRISP}

    def test_full_column_of_ones(self):
        u = pm([[1.0, 1.0], [0.0, 1.0]], "bfpm")
        assert class_hierarchy_check(u) == {PartitionClass.POSSIBILISTIC, PartitionClass.BFPM}

    @pytest.mark.parametrize("cls", sorted(BUILDERS))
    def test_random_constructions(self, cls, rng):
        for _ in range(200):
            u = BUILDERS[cls](rng)
            got = class_hierarchy_check(pm(u, cls))
            assert PartitionClass(cls) in got
            if cls == "crisp":
                assert got == ALL
            if cls == "fuzzy":
                assert {PartitionClass.POSSIBILISTIC, PartitionClass.BFPM} <= got
            assert not validate_partition(pm(break_class(cls, u, rng), cls)).satisfied


class TestStaticMembership:
    @pytest.mark.parametrize("d, expected", [(0.0, 1.0), (1.0, 0.5), (3.0, 0.0), (2.0, 0.0), (0.5, 0.75)])
    def test_values(self, d, expected):
        assert static_membership(d, 2.0) == expected

    def test_negative(self):
        with pytest.raises(ValueError):
            static_membership(-0.1)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 10), st.floats(0, 10), st.floats(0.1, 5))
    def test_non_increasing(self, a, b, delta):
        lo, hi = sorted((a, b))
        assert static_membership(hi, delta) <= static_membership(lo, delta)
        assert 0.0 <= static_membership(a, delta) <= 1.0


class TestAssignStatic:
    def test_bfpm_reproduces_worked_matrices(self):
        assert assign_static(np.array(D1, float), 2.0, "bfpm").values.tolist() == U_BFPM_A
        assert assign_static(np.array(D2, float), 2.0, "bfpm").values.tolist() == U_BFPM_B

    def test_fuzzy_reproduces_worked_matrices(self):
        np.testing.assert_allclose(assign_static(np.array(D1, float), 2.0, "fuzzy").values, U_FUZZY_A)
        np.testing.assert_allclose(assign_static(np.array(D2, float), 2.0, "fuzzy").values, U_FUZZY_B)

    def test_crisp_origin_goes_to_first_line(self):
        u = assign_static(np.array(D1, float), 2.0, "crisp").values
        assert u.tolist() == U_CRISP_A

    def test_fuzzy_outside_support(self):
        with pytest.raises(ValueError, match="object outside all supports"):
            assign_static(np.array([[3.0], [4.0]]), 2.0, "fuzzy")

    def test_possibilistic_unsupported(self):
        with pytest.raises(ValueError):
            assign_static(np.zeros((2, 2)), 2.0, "possibilistic")

    @settings(max_examples=200, deadline=None)
    @given(arrays(np.float64, (3, 5), elements=st.floats(0, 4)), st.floats(0.5, 3))
    def test_fuzzy_always_valid(self, d, delta):
        # every object inside some support, and every cluster supporting some object
        if np.any(np.all(d >= delta, axis=0)) or np.any(np.all(d >= delta, axis=1)):
            return
        u = assign_static(d, delta, "fuzzy")
        assert validate_partition(u, "fuzzy").satisfied

    @settings(max_examples=200, deadline=None)
    @given(arrays(np.float64, (3, 5), elements=st.floats(0, 4)), st.floats(0.5, 3))
    def test_bfpm_support_rule(self, d, delta):
        u = assign_static(d, delta, "bfpm")
        inside = np.any(d < delta, axis=0)
        report = validate_partition(u)
        flagged = {v.obj for v in report.violations if v.constraint == "column_mean"}
        assert flagged == set(np.flatnonzero(~inside))


class TestCapToUnitSum:
    def test_already_unit(self):
        np.testing.assert_allclose(cap_to_unit_sum(np.array([1.0, 0.0])), [1.0, 0.0])

    def test_caps_common_ceiling(self):
        np.testing.assert_allclose(cap_to_unit_sum(np.array([1.0, 1.0])), [0.5, 0.5])
        np.testing.assert_allclose(cap_to_unit_sum(np.array([1.0, 0.5])), [0.5, 0.5])
        np.testing.assert_allclose(cap_to_unit_sum(np.array([1.0, 0.5, 0.1])), [0.45, 0.45, 0.1])

    def test_rescales_short_columns(self):
        np.testing.assert_allclose(cap_to_unit_sum(np.array([0.25, 0.25])), [0.5, 0.5])

    def test_zero_column(self):
        with pytest.raises(ValueError, match="object outside all supports"):
            cap_to_unit_sum(np.zeros(3))


class TestCrossingLines:
    def test_axes(self):
        lines = generate_crossing_lines([[0, 1], [1, 0]], 5, 1.0)
        a = lines.dataset.objects[lines.members[0]]
        b = lines.dataset.objects[lines.members[1]]
        assert a.tolist() == [[-2, 0], [-1, 0], [0, 0], [1, 0], [2, 0]]
        assert b.tolist() == [[0, -2], [0, -1], [0, 0], [0, 1], [0, 2]]
        assert lines.dataset.n == 9
        assert lines.block(0).tolist() == D1
        assert lines.block(1).tolist() == D2

    def test_single_vertical_line(self):
        lines = generate_crossing_lines([[1, 0]], 3)
        assert lines.dataset.objects.tolist() == [[0, -1], [0, 0], [0, 1]]
        assert lines.distances.tolist() == [[0, 0, 0]]

    def test_diagonal(self):
        lines = generate_crossing_lines([[1, -1]], 5)
        x = lines.dataset.objects
        assert [1.0, 1.0] in x.tolist()
        np.testing.assert_allclose(lines.distances, 0.0, atol=1e-15)

    def test_distances_are_point_to_line(self, rng):
        coef = rng.normal(size=(3, 2))
        lines = generate_crossing_lines(coef, 7, 0.5)
        for i, a in enumerate(coef):
            for j, p in enumerate(lines.dataset.objects):
                assert lines.distances[i, j] == pytest.approx(abs(a @ p) / np.hypot(*a), abs=1e-12)

    @pytest.mark.parametrize("coef, points", [([[0, 0]], 5), ([[1, 0]], 4)])
    def test_rejects(self, coef, points):
        with pytest.raises((ValueError, DataError)):
            generate_crossing_lines(coef, points)

    def test_degenerate_message(self):
        with pytest.raises(DataError, match="degenerate line"):
            generate_crossing_lines([[1, 2], [0, 0]])

    def test_blocks(self):
        lines = generate_crossing_lines([[0, 1], [1, 0]])
        assert [b.tolist() for b in crossing_line_blocks(lines, 2.0, "crisp")] == [U_CRISP_A, U_CRISP_B]
        assert [b.tolist() for b in crossing_line_blocks(lines, 2.0, "bfpm")] == [U_BFPM_A, U_BFPM_B]

    def test_origin_is_property_two_witness(self):
        lines = generate_crossing_lines([[0, 1], [1, 0], [1, -1]])
        u = assign_static(lines.distances, 2.0, "bfpm")
        assert validate_partition(u).satisfied
        assert np.any(np.all(u.values == 1.0, axis=0))


class TestDivisible:
    def test_default(self):
        ds, u = divisible_demo()
        assert ds.n == 60  # 50 even + 20 multiples of 5 - 10 multiples of 10
        assert validate_partition(u).satisfied
        assert int(np.sum(u.values.min(axis=0) == 1.0)) == 10

    def test_include_all_leaves_orphans(self):
        ds, u = divisible_demo(include_all=True)
        assert ds.n == 100
        assert not validate_partition(u).satisfied
