import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rainbow_sidon import (DomainError, PointSet, Template, classify_template, count_rainbow_free,
                           count_rainbow_subtemplates, count_solutions, count_template_colorings,
                           is_rainbow_free, is_subtemplate)
from rainbow_sidon import oracle
from rainbow_sidon.exact import Interval
from rainbow_sidon.templates import (bad_template_bound, container_conclusions_check,
                                     dominant_palette, dominant_palette_scan,
                                     injective_assignments, mask_of, palette_product_bound)

from _util import interval, spec


def _sols(A, s):
    return count_solutions(A, s).solutions


def test_subtemplate_examples():
    A = interval(4)
    P = Template.from_sets(A, 4, [{1, 2}, {3}, {4}, {1}])
    empty = Template(A, 4, (0, 0, 0, 0))
    assert is_subtemplate(P, P)
    assert is_subtemplate(empty, P)
    Q = Template.from_sets(A, 4, [{1}, {3}, {4}, {1}])
    assert not is_subtemplate(P, Q)
    with pytest.raises(DomainError):
        is_subtemplate(P, Template.full(interval(5), 4))


def test_palette_validation():
    with pytest.raises(DomainError):
        Template.from_sets(interval(2), 3, [{1}, {4}])
    with pytest.raises(DomainError):
        Template.from_sets(interval(2), 3, [{1}])


def test_rainbow_subtemplate_examples():
    A, s = interval(4), spec(4, r=4)
    sols = _sols(A, s)
    assert count_rainbow_subtemplates(Template.full(A, 4), sols) == 24
    assert count_rainbow_subtemplates(Template.uniform(A, 4, {1}), sols) == 0
    assert count_rainbow_subtemplates(Template.from_sets(A, 4, [{1}, {2}, {3}, {4}]), sols) == 1


def test_template_coloring_examples():
    A, s = interval(4), spec(4, r=4)
    sols = _sols(A, s)
    assert count_template_colorings(Template.uniform(A, 4, {1}), sols) == 1
    assert count_template_colorings(Template.full(A, 4), sols) == 232
    assert count_template_colorings(Template.from_sets(A, 4, [{1}, set(), {2}, {3}]), sols) == 0


def test_template_lines_roundtrip():
    A = PointSet.from_points(spec(6).grid, [(1,), (3,), (6,)])
    P = Template.from_sets(A, 5, [{1, 5}, set(), {2, 3, 4}])
    text = P.to_lines()
    assert text == "0: {1,5}\n2: {}\n5: {2,3,4}\n"
    assert Template.from_lines(A, 5, text) == P
    with pytest.raises(DomainError):
        Template.from_lines(A, 5, "0: {1}\n")
    with pytest.raises(DomainError):
        Template.from_lines(A, 5, "zero: {1}\n")


def test_classification_examples():
    A, s = interval(16), spec(16, r=4)
    cl = classify_template(Template.uniform(A, 4, {1, 2, 3}), s)
    assert cl.x_sizes[3] == 16 and sum(cl.x_sizes.values()) == 16
    assert cl.verdict == "good"
    assert cl.dominant == (1, 2, 3) and cl.dominant_size == 16
    assert cl.dominant_check.holds
    cl = classify_template(Template.uniform(A, 4, {1}), s)
    assert cl.x_sizes[1] == cl.x_low == 16
    assert cl.verdict == "bad"
    half = Template.from_sets(A, 4, [{1, 2, 4} if i % 2 else {1, 2, 3} for i in range(16)])
    cl = classify_template(half, s)
    assert cl.dominant == (1, 2, 3) and cl.dominant_size == 8
    assert dominant_palette_scan(half, 3) == (cl.dominant, cl.dominant_size)


def test_classification_errors():
    with pytest.raises(DomainError):
        classify_template(Template.full(interval(1), 4), spec(1, r=4))
    with pytest.raises(DomainError):
        classify_template(Template.full(interval(4), 2), spec(4, r=2))


def test_container_check_examples():
    A, s = interval(4), spec(4, r=4)
    sols = _sols(A, s)
    coloring = Template.from_sets(A, 4, [{1}, {1}, {2}, {3}])
    rep = container_conclusions_check([Template.full(A, 4)], [coloring], s, sols)
    assert rep.coverage_ok and rep.covered == [True]
    assert rep.size_ok
    rep = container_conclusions_check([], [coloring], s, sols)
    assert not rep.coverage_ok
    rainbow = Template.from_sets(A, 4, [{1}, {2}, {3}, {4}])
    rep = container_conclusions_check([], [rainbow], s, sols)
    assert rep.skipped == [0] and rep.coverage_ok


def test_container_rainbow_threshold_value():
    s = spec(256, r=4)
    A = interval(256)
    rep = container_conclusions_check([Template.full(A, 4)], [], s, [])
    expected = Fraction(256**3, 8**20)
    assert rep.rainbow_threshold.lo == rep.rainbow_threshold.hi == expected


def test_injective_assignments_small():
    assert injective_assignments([0b1111] * 4) == 24
    assert injective_assignments([0b1, 0b1]) == 0
    assert injective_assignments([0b11, 0b11, 0b111]) == 2
    assert injective_assignments([]) == 1


def test_bounds_on_template_counts():
    A, s = interval(6), spec(6, r=4)
    sols = _sols(A, s)
    P = Template.from_sets(A, 4, [{1, 2, 3}, {1, 2}, {1, 2, 3, 4}, {2, 3, 4}, {1}, {1, 2, 3}])
    g = count_template_colorings(P, sols)
    assert g <= palette_product_bound(P) <= bad_template_bound(P, s)


# Property tests.

A7, S7 = interval(7), spec(7, r=4)
SOLS7 = count_solutions(A7, S7).solutions
PALETTE = st.integers(0, 15)


@settings(max_examples=60, deadline=None)
@given(st.lists(PALETTE, min_size=7, max_size=7), st.lists(PALETTE, min_size=7, max_size=7))
def test_monotone_under_inclusion(p, q):
    P1 = Template(A7, 4, tuple(a & b for a, b in zip(p, q)))
    P2 = Template(A7, 4, tuple(p))
    assert is_subtemplate(P1, P2)
    assert count_rainbow_subtemplates(P1, SOLS7) <= count_rainbow_subtemplates(P2, SOLS7)
    assert count_template_colorings(P1, SOLS7) <= count_template_colorings(P2, SOLS7)


@settings(max_examples=60, deadline=None)
@given(st.lists(PALETTE, min_size=7, max_size=7))
def test_template_counts_match_enumeration(p):
    P = Template(A7, 4, tuple(p))
    assert count_template_colorings(P, SOLS7) == oracle.template_colorings(P.palettes, A7, [tuple(x.coords(A7.grid)) for x in SOLS7])
    assert count_rainbow_subtemplates(P, SOLS7) == oracle.template_rainbow_count(P.palettes, A7, [tuple(x.coords(A7.grid)) for x in SOLS7])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=7, max_size=7))
def test_coloring_as_template(colors):
    P = Template.from_coloring(A7, 4, colors)
    free = is_rainbow_free(colors, SOLS7, A7)
    assert free == (count_rainbow_subtemplates(P, SOLS7) == 0)
    assert count_template_colorings(P, SOLS7) == int(free)


@settings(max_examples=60, deadline=None)
@given(st.lists(PALETTE, min_size=7, max_size=7))
def test_classification_partition(p):
    P = Template(A7, 4, tuple(p))
    cl = classify_template(P, S7)
    assert sum(cl.x_sizes.values()) == 7
    assert dominant_palette(P, 3) == dominant_palette_scan(P, 3)


def test_full_template_matches_coloring_count():
    A, s = interval(9), spec(9, r=5)
    assert count_template_colorings(Template.full(A, 5), _sols(A, s)) == count_rainbow_free(A, s).g
