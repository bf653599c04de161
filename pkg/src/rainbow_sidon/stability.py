"""Exact arithmetic behind the stability and size-regime arguments.

* Size regimes: sparse ``|A| <= n^d / log2 n``, dense
  ``|A| >= n^d - n^d / log2 n``, medium in between.
* Deviation sets: for a color set ``C`` of size ``kh - 1`` and a set ``M`` of
  points colored outside ``C``, a greedy family of disjoint completions of a
  point of ``M`` caps the number of rainbow-free colorings with deviation
  set exactly ``M``.  The cap is compared with the exact count.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError
from .exact import Interval, decide, log2_interval, render_fraction
from .grid import EquationSpec, PointSet
from .solutions import Solution, count_solutions, count_through_point, greedy_disjoint_family
from .templates import Template, count_template_colorings, mask_of


class Regime(str, enum.Enum):
    SPARSE = "sparse"
    MEDIUM = "medium"
    DENSE = "dense"


def sparse_threshold(spec: EquationSpec, bits: int = 256) -> Interval:
    """``n^d / log2 n``."""
    if spec.n < 2:
        raise DomainError("size regimes need n >= 2")
    return Interval.exact(spec.n**spec.d) / log2_interval(spec.n, bits)


def dense_threshold(spec: EquationSpec, bits: int = 256) -> Interval:
    """``n^d - n^d / log2 n``."""
    return spec.n**spec.d - sparse_threshold(spec, bits)


def size_regime(size: int, spec: EquationSpec) -> Regime:
    """Sparse takes precedence when the two thresholds cross (``n <= 4``)."""
    if decide(lambda b: Interval.exact(size).le(sparse_threshold(spec, b))):
        return Regime.SPARSE
    if decide(lambda b: dense_threshold(spec, b).le(size)):
        return Regime.DENSE
    return Regime.MEDIUM


@dataclass
class RegimeReport:
    sparse_max: Interval
    dense_min: Interval
    sparse_beats_full: bool

    def to_json(self) -> dict:
        return {"sparse_max": self.sparse_max.to_json(), "dense_min": self.dense_min.to_json(),
                "sparse_power_below_full_power": self.sparse_beats_full}


def regime_report(spec: EquationSpec) -> RegimeReport:
    """Thresholds, and whether ``r^s < (kh-1)^{n^d}`` for the largest sparse size ``s``."""
    r = spec.require_colors()
    s = decide_floor(lambda b: sparse_threshold(spec, b))
    ok = r**s < (spec.total - 1) ** (spec.n**spec.d)
    return RegimeReport(sparse_threshold(spec), dense_threshold(spec), ok)


def decide_floor(build) -> int:
    """Floor of a quantity known through shrinking intervals."""
    for bits in (256, 1024, 4096):
        iv = build(bits)
        if math.floor(iv.lo) == math.floor(iv.hi):
            return math.floor(iv.lo)
    raise DomainError("could not resolve the floor at the available precision")


def gain_constants(spec: EquationSpec) -> tuple[Fraction, Fraction]:
    """``(r/(kh-1), 1 - (kh-1)!/(kh-1)^{kh-1})``: the color gain and the per-block loss."""
    r = spec.require_colors()
    m = spec.total - 1
    return Fraction(r, m), Fraction(m**m - math.factorial(m), m**m)


@dataclass
class DeviationBound:
    deviation_size: int
    completions: int
    disjoint: int
    bound: int
    exact: int | None

    @property
    def holds(self) -> bool | None:
        return None if self.exact is None else self.exact <= self.bound

    def to_json(self) -> dict:
        return {"deviation_size": self.deviation_size, "completions": self.completions,
                "disjoint_completions": self.disjoint, "bound": self.bound,
                "exact": self.exact, "holds": self.holds}


def deviation_template(A: PointSet, M: PointSet, C: Iterable[int], r: int) -> Template:
    """Palette ``[r] - C`` on ``M`` and ``C`` elsewhere."""
    inside = mask_of(C)
    outside = ((1 << r) - 1) & ~inside
    return Template(A, r, tuple(outside if p in M else inside for p in A.points))


def deviation_bound(A: PointSet, M: PointSet, C: Iterable[int], spec: EquationSpec, *,
                    solutions: list[Solution] | None = None, exact: bool = True) -> DeviationBound:
    """Cap on rainbow-free colorings whose points outside ``C`` are exactly ``M``.

    The first point ``v`` of ``M`` gets a color outside ``C``, so no completion
    of ``v`` inside ``A - M`` may be rainbow.  With ``t`` pairwise disjoint
    completions the cap is
    ``r^|M| ((kh-1)^{kh-1} - (kh-1)!)^t (kh-1)^{|A| - |M| - (kh-1) t}``.
    """
    r = spec.require_colors()
    spec.require_symmetric()
    C = sorted(set(C))
    m = spec.total - 1
    if len(C) != m or not set(C) <= set(range(1, r + 1)):
        raise DomainError(f"color set must be {m} colors inside [1, {r}], got {C}")
    if len(M) == 0 or len(M - A) > 0:
        raise DomainError("the deviation set must be a nonempty subset of A")
    v = M.points[0]
    base = (A - M).add(v)
    fam = count_through_point(base, v, spec)
    t = len(greedy_disjoint_family(fam.family, spec.grid.rank(v)).members)
    bound = r ** len(M) * (m**m - math.factorial(m)) ** t * m ** (len(A) - len(M) - m * t)
    value = None
    if exact:
        if solutions is None:
            solutions = count_solutions(A, spec).solutions
        value = count_template_colorings(deviation_template(A, M, C, r), solutions)
    return DeviationBound(len(M), fam.count, t, bound, value)


def gain_identity(spec: EquationSpec, size: int, deviation_size: int, disjoint: int) -> bool:
    """Check ``alpha^|M| beta^{-t} (kh-1)^|A|`` equals the product form of the cap."""
    r = spec.require_colors()
    m = spec.total - 1
    alpha, inv_beta = gain_constants(spec)
    lhs = alpha**deviation_size * inv_beta**disjoint * Fraction(m) ** size
    rhs = Fraction(r**deviation_size * (m**m - math.factorial(m)) ** disjoint) * \
        Fraction(m) ** (size - deviation_size - m * disjoint)
    return lhs == rhs


def render_gain(spec: EquationSpec) -> dict:
    alpha, inv_beta = gain_constants(spec)
    return {"alpha": render_fraction(alpha), "inverse_beta": render_fraction(inv_beta)}
