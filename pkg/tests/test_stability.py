import math
from fractions import Fraction

import pytest

from rainbow_sidon import DomainError, PointSet
from rainbow_sidon.stability import (Regime, deviation_bound, gain_constants, gain_identity,
                                     regime_report, render_gain, size_regime, sparse_threshold)

from _util import interval, pts, spec


def test_regimes_at_16():
    s = spec(16)
    assert sparse_threshold(s).lo == 4
    assert size_regime(4, s) is Regime.SPARSE
    assert size_regime(5, s) is Regime.MEDIUM
    assert size_regime(12, s) is Regime.DENSE
    assert size_regime(11, s) is Regime.MEDIUM


def test_sparse_wins_at_tiny_n():
    s = spec(4)
    assert all(size_regime(x, s) is Regime.SPARSE for x in range(0, 3))
    assert size_regime(3, s) is Regime.DENSE
    with pytest.raises(DomainError):
        size_regime(1, spec(1))


def test_regime_report():
    rep = regime_report(spec(16, r=4))
    assert rep.sparse_beats_full == (4**4 < 3**16)


def test_gain_constants():
    alpha, inv_beta = gain_constants(spec(8, r=4))
    assert alpha == Fraction(4, 3)
    assert inv_beta == Fraction(27 - 6, 27)
    assert render_gain(spec(8, r=4)) == {"alpha": "4/3", "inverse_beta": "7/9"}
    assert gain_identity(spec(8, r=4), 8, 2, 1)


@pytest.mark.parametrize("n,r", [(6, 4), (8, 4), (8, 5)])
def test_deviation_bound_dominates_exact(n, r):
    s = spec(n, r=r)
    A = interval(n)
    for M in ([1], [n], [2, 5], [1, 3, n]):
        res = deviation_bound(A, pts(n, M), {1, 2, 3}, s)
        assert res.holds, (M, res)
        assert res.bound == r ** len(M) * (27 - 6) ** res.disjoint * 3 ** (n - len(M) - 3 * res.disjoint)


def test_deviation_bound_errors():
    s = spec(6, r=4)
    with pytest.raises(DomainError):
        deviation_bound(interval(6), pts(6, [1]), {1, 2}, s)
    with pytest.raises(DomainError):
        deviation_bound(interval(6), pts(6, []), {1, 2, 3}, s)
