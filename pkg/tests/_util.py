"""Small constructors shared by the tests."""

from rainbow_sidon import Ambient, EquationSpec, PointSet


def spec(n, k=2, h=2, r=None, d=1, ambient=Ambient.BOX):
    return EquationSpec.symmetric(d, n, k, h, r, ambient)


def interval(n, lo=1, hi=None, d=1):
    return PointSet.interval(spec(n, d=d).grid, lo, n if hi is None else hi)


def pts(n, xs, d=1, ambient=Ambient.BOX):
    grid = spec(n, d=d, ambient=ambient).grid
    return PointSet.from_points(grid, [(x,) if isinstance(x, int) else x for x in xs])
