import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from rainbow_sidon import (Ambient, CapacityError, DomainError, PointSet, count_deviating,
                           count_rainbow_free, count_solutions, is_rainbow_free,
                           lower_bound_value)
from rainbow_sidon import oracle
from rainbow_sidon.coloring import (census_with_deviation, count_rainbow_free_torus,
                                    deviation_census)

from _util import interval, pts, spec


def _sols(A, s):
    return count_solutions(A, s).solutions


def test_is_rainbow_free_examples():
    A, s = interval(4), spec(4)
    sols = _sols(A, s)
    assert is_rainbow_free([1, 1, 1, 1], sols, A)
    assert not is_rainbow_free([1, 2, 3, 4], sols, A)
    assert is_rainbow_free([1, 2, 3, 1], sols, A)
    with pytest.raises(DomainError):
        is_rainbow_free([1, 2, 3], sols, A)


def test_count_rainbow_free_examples():
    assert count_rainbow_free(interval(4), spec(4, r=4)).g == 232
    assert count_rainbow_free(interval(3), spec(3, r=4)).g == 64
    assert count_rainbow_free(interval(4), spec(4, r=3)).g == 81


def test_census_breakdown_for_interval_four():
    census = count_rainbow_free(interval(4), spec(4, r=4))
    assert census.by_palette_size == {1: 4, 2: 84, 3: 144}
    assert sum(census.by_palette_size.values()) == census.g
    assert census.lower_bound == 144 <= census.g


def test_colors_required():
    with pytest.raises(DomainError):
        count_rainbow_free(interval(4), spec(4))


def test_coloring_budget():
    with pytest.raises(CapacityError):
        count_rainbow_free(interval(12), spec(12, r=5), budget=100)


def test_lower_bound_examples():
    assert lower_bound_value(2, 2, 2, 3) == 0
    assert lower_bound_value(2, 2, 2, 7) == 0
    assert lower_bound_value(3, 2, 2, 4) == 24
    assert lower_bound_value(4, 2, 2, 4) == 144


@pytest.mark.parametrize("k,h", [(2, 2), (2, 3), (3, 2)])
def test_lower_bound_is_surjection_count(k, h):
    m = k * h - 1
    for size in range(0, 8):
        onto = sum(1 for c in itertools.product(range(m), repeat=size) if len(set(c)) == m)
        for r in (m, m + 1, m + 3):
            assert lower_bound_value(size, k, h, r) == math.comb(r, m) * onto


def test_count_deviating_examples():
    assert count_deviating(interval(3), {1, 2, 3}, spec(3, r=4)) == 37
    assert count_deviating(interval(4), {1, 2, 3}, spec(4, r=4)) == 151
    with pytest.raises(DomainError):
        count_deviating(interval(4), {1, 2}, spec(4, r=4))
    with pytest.raises(DomainError):
        count_deviating(interval(4), {1, 2, 9}, spec(4, r=4))


def test_deviation_histogram():
    census = census_with_deviation(interval(5), spec(5, r=4))
    assert sum(census.deviation.values()) == census.g == 808
    assert census.deviation[0] == 3**5
    assert census.deviating == census.g - 3**5


def test_torus_examples():
    s_t = spec(6, r=4, ambient=Ambient.TORUS)
    A = PointSet.from_points(s_t.grid, [(0,), (1,), (2,)])
    box = count_rainbow_free(interval(3), spec(3, r=4)).g
    assert count_rainbow_free_torus(A, s_t).g == box == 64
    s3 = spec(3, r=4, ambient=Ambient.TORUS)
    Z3 = PointSet(s3.grid, 0b111)
    assert count_rainbow_free_torus(Z3, s3).g == oracle.colorings(Z3, s3)[0]
    s5 = spec(5, r=4, ambient=Ambient.TORUS)
    Z5 = PointSet(s5.grid, 0b11111)
    assert count_rainbow_free_torus(Z5, s5).g <= count_rainbow_free(interval(5), spec(5, r=4)).g
    with pytest.raises(DomainError):
        count_rainbow_free_torus(interval(4), spec(4, r=4))


def test_pigeonhole_exhaustive():
    s = spec(6, r=5)
    A = interval(6)
    sols = _sols(A, s)
    for c in itertools.product(range(1, 6), repeat=6):
        if len(set(c)) <= 3:
            assert is_rainbow_free(list(c), sols, A)


def _subset(grid):
    return st.integers(0, (1 << grid.size) - 1).map(lambda bits: PointSet(grid, bits))


CASES = [spec(7, r=4), spec(7, r=5), spec(8, 2, 3, r=6), spec(3, r=4, d=2),
         spec(7, r=4, ambient=Ambient.TORUS)]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CASES), st.data())
def test_matches_enumeration(s, data):
    A = data.draw(_subset(s.grid))
    census = count_rainbow_free(A, s)
    g, hist = oracle.colorings(A, s)
    assert census.g == g
    assert census.by_palette_size == hist
    assert census.lower_bound <= census.g


@settings(max_examples=25, deadline=None)
@given(st.integers(0, (1 << 7) - 1), st.permutations([1, 2, 3, 4]))
def test_color_permutation_invariance(bits, perm):
    s = spec(7, r=4)
    A = PointSet(s.grid, bits)
    sols = _sols(A, s)
    free = {c for c in itertools.product(range(1, 5), repeat=len(A)) if is_rainbow_free(list(c), sols, A)}
    permuted = {tuple(perm[x - 1] for x in c) for c in free}
    assert free == permuted
    assert len(free) == count_rainbow_free(A, s).g


@settings(max_examples=25, deadline=None)
@given(st.integers(0, (1 << 7) - 1), st.integers(0, (1 << 7) - 1))
def test_ambient_monotonicity(b1, b2):
    box = spec(7, r=4)
    torus = spec(7, r=4, ambient=Ambient.TORUS)
    A = PointSet(box.grid, b1)
    assert count_rainbow_free(A.to_torus(), torus).g <= count_rainbow_free(A, box).g


@settings(max_examples=25, deadline=None)
@given(st.integers(0, (1 << 8) - 1), st.sets(st.integers(1, 5), min_size=3, max_size=3))
def test_deviating_consistency(bits, C):
    s = spec(8, r=5)
    A = PointSet(s.grid, bits)
    g = count_rainbow_free(A, s).g
    inside = count_rainbow_free(A, s.with_(r=3)).g
    assert count_deviating(A, C, s) == g - inside
    assert sum(deviation_census(A, s).values()) == g


def test_worker_count_does_not_change_census():
    s = spec(11, r=4)
    A = interval(11)
    assert count_rainbow_free(A, s, workers=1) == count_rainbow_free(A, s, workers=4)


def test_known_full_grid_values():
    assert count_rainbow_free(interval(5), spec(5, r=4)).g == 808
    assert count_rainbow_free(interval(8), spec(8, r=4)).g == 25240
