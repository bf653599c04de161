import math
from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rainbow_sidon import DomainError, PointSet, build_hypergraph, codegree_function
from rainbow_sidon import container_parameters, hypergraph_stats
from rainbow_sidon.exact import power_interval
from rainbow_sidon.hypergraph import (codegree_by_fixing, codegree_function_nested, deltaj_bound,
                                      deltaj_bound_asymptotic, deltaj_bound_check,
                                      epsilon_interval, tau_interval)

from _util import interval, spec


def _edge_codegree(H, j):
    tally = Counter()
    for e in H.edges():
        for U in combinations(sorted(e), j):
            tally[U] += 1
    return max(tally.values(), default=0)


def test_edge_counts():
    H = build_hypergraph(interval(4), spec(4, r=4))
    assert (H.vertex_count, H.edge_count) == (16, 24)
    assert build_hypergraph(interval(3), spec(3, r=4)).edge_count == 0
    assert build_hypergraph(interval(5), spec(5, r=4)).edge_count == 72


def test_codegree_examples():
    H = build_hypergraph(interval(4), spec(4, r=4))
    assert H.max_codegree(2) == 2
    assert H.max_codegree(4) == 1
    with pytest.raises(DomainError):
        H.max_codegree(1)


def test_same_point_vertices_never_share_an_edge():
    H = build_hypergraph(interval(5), spec(5, r=4))
    assert not any({(0, 1), (0, 2)} <= e for e in H.edges())


def test_needs_enough_colors():
    with pytest.raises(DomainError):
        build_hypergraph(interval(4), spec(4, r=3))


def test_average_degree():
    H = build_hypergraph(interval(6), spec(6, r=5))
    assert H.avg_degree == Fraction(4 * H.edge_count, H.vertex_count)
    degree = Counter(v for e in H.edges() for v in e)
    assert sum(degree.values()) == 4 * H.edge_count


def test_codegree_function_single_solution():
    H = build_hypergraph(interval(4), spec(4, r=4))
    tau = Fraction(1, 2)
    d = Fraction(4 * 24, 16)
    by_hand = Fraction(0)
    for j, delta in {2: 2, 3: 1, 4: 1}.items():
        by_hand += Fraction(2) ** (6 - 1 - math.comb(j - 1, 2)) * delta / (d * tau ** (j - 1))
    assert codegree_function(H, tau) == by_hand == codegree_function_nested(H, tau)


def test_codegree_function_errors():
    with pytest.raises(DomainError):
        codegree_function(build_hypergraph(interval(3), spec(3, r=4)), Fraction(1, 2))
    with pytest.raises(DomainError):
        codegree_function(build_hypergraph(interval(4), spec(4, r=4)), Fraction(3, 2))


def test_parameters_at_n4():
    s = spec(4, r=4)
    eps = epsilon_interval(s)
    assert eps.lo == eps.hi == Fraction(1, 24 * 2**20)
    tau = tau_interval(s, 256)
    expected = power_interval(4, Fraction(-2, 3), 256) * 2**8
    assert tau.lo <= expected.hi and expected.lo <= tau.hi
    rep = container_parameters(s, build_hypergraph(interval(4), s))
    assert rep.tau_ok is False
    assert not rep.hypothesis_ok
    for n in (2, 3, 17, 100):
        t = container_parameters(spec(n, r=4))
        assert t.epsilon.lo > 0 and t.tau.lo > 0


def test_deltaj_bound_examples():
    H = build_hypergraph(interval(4), spec(4, r=4))
    check = deltaj_bound_check(H, 2)
    assert check.exact == 2 and check.bound == 128 and check.holds
    assert deltaj_bound(4, 2, 2, 4, 4) == 1
    empty = build_hypergraph(interval(3), spec(3, r=4))
    assert all(v == 0 for v in empty.codegrees().values())
    assert all(deltaj_bound_check(empty, j).holds for j in range(2, 5))
    with pytest.raises(DomainError):
        deltaj_bound(5, 2, 2, 4, 4)


def test_asymptotic_form_has_factor_two():
    assert deltaj_bound_asymptotic(2, 2, 2, 4, 10) == 2 * 16 * 10
    assert deltaj_bound_asymptotic(1 + 1, 2, 3, 6, 10) == 6**4 * 10**3


def test_stats_block():
    stats = hypergraph_stats(build_hypergraph(interval(5), spec(5, r=4)))
    data = stats.to_json()
    assert data["edges"] == 72 and data["vertices"] == 20
    assert data["delta"]["4"] == 1


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([spec(8, r=4), spec(8, r=5), spec(8, 2, 3, r=6), spec(3, r=4, d=2)]),
       st.data())
def test_codegree_paths_agree(s, data):
    A = PointSet(s.grid, data.draw(st.integers(0, (1 << s.grid.size) - 1)))
    H = build_hypergraph(A, s)
    assert H.edge_count == sum(1 for _ in H.edges())
    for j in range(2, s.total + 1):
        assert H.max_codegree(j) == codegree_by_fixing(H, j) == _edge_codegree(H, j)
    if H.edge_count:
        assert H.max_codegree(s.total) == 1
        tau = Fraction(1, 3)
        assert codegree_function(H, tau) == codegree_function_nested(H, tau)
