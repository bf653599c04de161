import pytest
from hypothesis import given, settings, strategies as st

from rainbow_sidon import Ambient, CapacityError, DomainError, EquationSpec, Grid, PointSet
from rainbow_sidon import full_grid, point_sum, rank, unrank

from _util import pts, spec


def test_rank_examples():
    s = spec(3, d=2)
    assert rank((1, 1), s) == 0
    assert rank((1, 3), s) == 2
    assert rank((3, 3), s) == 8


def test_rank_rejects_out_of_range():
    with pytest.raises(DomainError):
        rank((0, 1), spec(3, d=2))
    with pytest.raises(DomainError):
        rank((4,), spec(3))


def test_point_sum_examples():
    assert point_sum([(2,), (3,)], spec(5)) == (5,)
    assert point_sum([(3,), (4,)], spec(5, ambient=Ambient.TORUS)) == (2,)
    assert point_sum([(1, 2), (3, 1)], spec(3, d=2)) == (4, 3)


def test_full_grid_sizes():
    assert full_grid(spec(4)).points == ((1,), (2,), (3,), (4,))
    assert len(full_grid(spec(2, d=2))) == 4
    assert len(full_grid(spec(2, d=3))) == 8


def test_rank_cap():
    with pytest.raises(CapacityError):
        Grid(Ambient.BOX, 4, 300)


def test_spec_validation():
    with pytest.raises(DomainError):
        EquationSpec(Ambient.BOX, 1, 4, (2,))
    with pytest.raises(DomainError):
        EquationSpec(Ambient.BOX, 1, 4, (2, 0))
    with pytest.raises(DomainError):
        EquationSpec(Ambient.BOX, 1, 4, (2, 2), r=0)


def test_rank_roundtrip_full_scan():
    grid = Grid(Ambient.BOX, 3, 7)
    for i, p in enumerate(grid.points()):
        assert grid.rank(p) == i
        assert grid.unrank(i) == p


@given(st.integers(1, 3), st.integers(1, 9), st.data())
def test_unrank_rank(d, n, data):
    grid = Grid(Ambient.BOX, d, n)
    i = data.draw(st.integers(0, grid.size - 1))
    assert grid.rank(grid.unrank(i)) == i


def _sets(grid):
    return st.integers(0, (1 << grid.size) - 1).map(lambda b: PointSet(grid, b))


GRID = Grid(Ambient.BOX, 2, 4)


@given(_sets(GRID), _sets(GRID), _sets(GRID))
def test_set_algebra(a, b, c):
    assert (a | b) | c == a | (b | c)
    assert a & (b | c) == (a & b) | (a & c)
    assert len(a | b) + len(a & b) == len(a) + len(b)
    assert (a - b).isdisjoint(b)
    assert a.reflect().reflect() == a


@given(_sets(GRID))
def test_serialization_roundtrip(a):
    assert PointSet.from_rle(a.to_rle()) == a
    assert PointSet.from_lines(GRID, a.to_lines()) == a
    assert a.digest() == PointSet(GRID, a.bits).digest()


TORUS = Grid(Ambient.TORUS, 2, 5)


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=3, max_size=3))
def test_torus_sum_associative(ps):
    a, b, c = ps
    left = TORUS.add([TORUS.add([a, b]), c])
    right = TORUS.add([a, TORUS.add([b, c])])
    assert left == right == TORUS.add(ps)


def test_torus_box_conversion():
    A = pts(5, [1, 3, 5])
    T = A.to_torus()
    assert T.grid.ambient is Ambient.TORUS
    assert T.points == ((0,), (2,), (4,))
    assert T.to_box() == A


@settings(max_examples=50)
@given(st.integers(0, (1 << 9) - 1))
def test_point_order_is_rank_order(bits):
    A = PointSet(Grid(Ambient.BOX, 2, 3), bits)
    assert list(A.ranks) == sorted(A.ranks)
    assert [A.grid.rank(p) for p in A.points] == list(A.ranks)
