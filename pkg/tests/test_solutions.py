import math

import pytest
from hypothesis import given, settings, strategies as st

from rainbow_sidon import (Ambient, CapacityError, DomainError, EquationSpec, Grid, PointSet,
                           count_cross, count_solutions, count_through_point,
                           greedy_disjoint_family, multiplicity_map)
from rainbow_sidon import oracle
from rainbow_sidon.solutions import (Parallelogram, Solution, classify_parallelogram,
                                     degenerate_count_bound_check, repeated_tuple_bound,
                                     solution_upper_bound, solutions_csv, split_count)

from _util import interval, pts, spec


def test_multiplicity_map_examples():
    assert multiplicity_map(pts(3, [1, 2, 3]), 2).counts == {(3,): 1, (4,): 1, (5,): 1}
    assert multiplicity_map(pts(3, [1]), 2).counts == {}
    mm = multiplicity_map(interval(4), 2)
    assert mm.counts == {(3,): 1, (4,): 1, (5,): 2, (6,): 1, (7,): 1}
    assert mm.total == 6


def test_multiplicity_map_json_roundtrip():
    mm = multiplicity_map(interval(3, d=2), 3)
    back = type(mm).from_json(mm.to_json())
    assert back == mm


def test_count_solutions_examples():
    s = spec(5)
    assert count_solutions(interval(4), spec(4)).count == 1
    census = count_solutions(interval(5), s)
    assert census.count == 3
    assert [c.points for c in census.solutions] == [(0, 1, 2, 3), (0, 1, 3, 4), (1, 2, 3, 4)]
    assert count_solutions(pts(4, [1, 2, 4]), spec(4)).count == 0


def test_census_bookkeeping_on_interval_five():
    census = count_solutions(interval(5), spec(5))
    assert census.equal_sum_families == 3
    assert census.partitions == 3
    assert census.repeated_tuples == oracle.repeated_tuples(interval(5), spec(5)) == 61


def test_solutions_validate_and_csv():
    s = spec(6, d=1)
    census = count_solutions(interval(6), s)
    for sol in census.solutions:
        sol.validate(s)
    text = solutions_csv(census.solutions, s.grid)
    assert text.count("\n") == census.count + 1


def test_invalid_witness_rejected():
    with pytest.raises(DomainError):
        Solution((0, 1, 2, 3), ((0, 1), (2, 3))).validate(spec(4))


def test_grid_mismatch_rejected():
    with pytest.raises(DomainError):
        count_solutions(interval(4), spec(5))


def test_bucket_budget():
    with pytest.raises(CapacityError):
        count_solutions(interval(30), spec(30, 2, 3), budget=100)


def test_count_cross_examples():
    s = spec(4)
    assert count_cross(pts(4, [1, 2]), pts(4, [3, 4]), 1, s) == 1
    assert count_cross(pts(4, [1]), pts(4, [3, 4]), 1, s) == 0
    assert count_cross(pts(4, [1, 3]), pts(4, [2, 4]), 1, s) == 1


def test_count_cross_errors():
    s = spec(4)
    with pytest.raises(DomainError):
        count_cross(pts(4, [1, 2]), pts(4, [2, 3]), 1, s)
    with pytest.raises(DomainError):
        count_cross(pts(4, [1, 2]), pts(4, [3, 4]), 2, s)


def test_count_through_point_examples():
    tp = count_through_point(interval(5), (1,), spec(5))
    assert tp.count == 2
    assert tp.family == [(1, 2, 3), (1, 3, 4)]
    assert count_through_point(interval(4), (2,), spec(4)).count == 1
    assert count_through_point(pts(4, [1, 2, 3]), (1,), spec(4)).count == 0
    with pytest.raises(DomainError):
        count_through_point(pts(4, [1, 2]), (3,), spec(4))


def test_greedy_disjoint_family_examples():
    assert greedy_disjoint_family([(2, 3, 4), (5, 6, 7)], 1).members == [(2, 3, 4), (5, 6, 7)]
    assert greedy_disjoint_family([(2, 3, 4), (4, 5, 6)], 1).members == [(2, 3, 4)]
    fam = count_through_point(interval(5), (1,), spec(5)).family
    result = greedy_disjoint_family(fam, 0)
    assert len(result.members) == 1 and result.holds
    with pytest.raises(DomainError):
        greedy_disjoint_family([(1, 2, 3)], 1)


def test_parallelogram_classification():
    s = spec(4, d=2)
    grid = s.grid

    def sol(points):
        return Solution(tuple(sorted(grid.rank(p) for p in points)))

    assert classify_parallelogram(sol([(1, 1), (2, 2), (3, 3), (4, 4)]), s) is Parallelogram.DEGENERATE
    assert classify_parallelogram(sol([(1, 1), (1, 2), (2, 1), (2, 2)]), s) is Parallelogram.NONDEGENERATE
    assert classify_parallelogram(sol([(1, 1), (3, 1), (1, 3), (3, 3)]), s) is Parallelogram.NONDEGENERATE
    with pytest.raises(DomainError):
        classify_parallelogram(sol([(1, 1), (1, 2), (2, 1), (2, 2)]), spec(4, 3, 2, d=2))


def test_degenerate_count_examples():
    s = spec(4, d=2)
    diag = pts(4, [(i, i) for i in range(1, 5)], d=2)
    rep = degenerate_count_bound_check(diag, s)
    assert (rep.degenerate, rep.bound, rep.holds) == (1, 64, True)
    square = pts(4, [(1, 1), (1, 2), (2, 1), (2, 2)], d=2)
    rep = degenerate_count_bound_check(square, s)
    assert (rep.degenerate, rep.nondegenerate, rep.holds) == (0, 1, True)
    assert degenerate_count_bound_check(pts(4, [(1, 1)], d=2), s).degenerate == 0


def test_closed_forms():
    assert split_count(2, 2) == 6
    assert split_count(3, 2) == 90
    assert repeated_tuple_bound(5, 2, 2) == 6 * 25
    assert solution_upper_bound(5, 2, 2) == 125


def test_mixed_groups_count():
    s = EquationSpec(Ambient.BOX, 1, 6, (1, 2))
    census = count_solutions(interval(6), s)
    assert census.count == len(oracle.solution_sets(interval(6), s))
    assert census.equal_sum_families is None


def test_torus_solutions_contain_box_solutions():
    box = spec(6)
    torus = spec(6, ambient=Ambient.TORUS)
    b = count_solutions(interval(6), box).count
    t = count_solutions(PointSet(torus.grid, (1 << 6) - 1), torus).count
    assert b <= t


# Property tests against the brute-force oracle.

def _subset(grid):
    return st.integers(0, (1 << grid.size) - 1).map(lambda bits: PointSet(grid, bits))


SPECS = [spec(9), spec(9, 2, 3), spec(9, 3, 2), spec(4, d=2), spec(3, d=3),
         EquationSpec(Ambient.BOX, 1, 9, (1, 3)), spec(7, ambient=Ambient.TORUS)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_count_matches_oracle(s, data):
    A = data.draw(_subset(s.grid))
    census = count_solutions(A, s)
    expected = sorted(oracle.solution_sets(A, s))
    assert census.count == len(expected)
    assert sorted(tuple(c.coords(s.grid)) for c in census.solutions) == expected
    if s.is_symmetric:
        assert census.equal_sum_families == oracle.equal_sum_families(A, s)
        assert census.repeated_tuples == oracle.repeated_tuples(A, s)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([spec(9), spec(4, d=2)]), st.integers(1, 4), st.data())
def test_multiplicity_matches_oracle(s, h, data):
    A = data.draw(_subset(s.grid))
    mm = multiplicity_map(A, h)
    assert mm.counts == oracle.multiplicity(A, h)
    assert mm.total == math.comb(len(A), h)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([spec(9), spec(9, 2, 3), spec(4, d=2)]), st.data())
def test_through_point_matches_oracle(s, data):
    A = data.draw(_subset(s.grid).filter(lambda a: len(a) > 0))
    v = data.draw(st.sampled_from(A.points))
    tp = count_through_point(A, v, s)
    expected = oracle.through_point(A, v, s)
    assert tp.count == len(expected)
    fam = greedy_disjoint_family(tp.family, s.grid.rank(v))
    assert fam.holds
    used = [u for f in fam.members for u in f]
    assert len(used) == len(set(used))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, (1 << 10) - 1), st.integers(0, (1 << 10) - 1), st.sampled_from([(2, 2, 1), (2, 3, 1), (2, 3, 2)]))
def test_cross_matches_oracle(b1, b2, khj):
    k, h, j = khj
    s = spec(10, k, h)
    A1 = PointSet(s.grid, b1)
    A2 = PointSet(s.grid, b2 & ~b1)
    assert count_cross(A1, A2, j, s) == len(oracle.cross_sets(A1, A2, j, s))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, (1 << 10) - 1), st.integers(0, (1 << 10) - 1))
def test_count_is_monotone(b1, b2):
    s = spec(10)
    small = PointSet(s.grid, b1 & b2)
    big = PointSet(s.grid, b1)
    assert count_solutions(small, s).count <= count_solutions(big, s).count


@settings(max_examples=30, deadline=None)
@given(st.integers(0, (1 << 16) - 1))
def test_reflection_preserves_counts(bits):
    s = spec(4, d=2)
    A = PointSet(s.grid, bits)
    R = A.reflect()
    assert count_solutions(A, s).count == count_solutions(R, s).count
    for p in A.points:
        q = tuple(s.n + 1 - c for c in p)
        assert count_through_point(A, p, s).count == count_through_point(R, q, s).count


def test_worker_count_does_not_change_solutions():
    s = spec(5, d=2)
    A = PointSet(s.grid, 0b1011011101101110111011011)
    one = count_solutions(A, s, workers=1)
    many = count_solutions(A, s, workers=3)
    assert one.solutions == many.solutions
    assert [c.witness for c in one.solutions] == [c.witness for c in many.solutions]
