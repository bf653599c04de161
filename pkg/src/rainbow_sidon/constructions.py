"""Explicit point-set constructions.

* Corner windows: for a corner ``v`` of ``[n]^d`` (coordinates 1 or n),
  disjoint boxes ``A_1..A_k`` and ``B_2..B_k`` such that choosing ``h - 1``
  points from each ``A_l`` forces a completion of ``v``'s solution with the
  missing point of group ``l`` inside ``B_l``.
* Shifted subgrid: a half-size box with ``v`` at one of its corners.
* Two solution-free sets for the two-group equation with unequal sizes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .errors import ConstructionError, DomainError, PropertyViolation
from .exact import render_fraction
from .grid import Ambient, EquationSpec, Grid, Point, PointSet
from .solutions import DEFAULT_BUCKET_BUDGET, count_solutions, multiplicity_map

#: Seed used when the caller does not supply one.
DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class Window:
    """Integers ``x`` with ``lo < x`` (or ``lo <= x``) and ``x < hi`` (or ``x <= hi``)."""

    lo: Fraction
    lo_strict: bool
    hi: Fraction
    hi_strict: bool

    def integers(self, low: int, high: int) -> range:
        first = math.floor(self.lo) + 1 if self.lo_strict else math.ceil(self.lo)
        last = math.ceil(self.hi) - 1 if self.hi_strict else math.floor(self.hi)
        return range(max(first, low), min(last, high) + 1)

    def render(self) -> str:
        left = "(" if self.lo_strict else "["
        right = ")" if self.hi_strict else "]"
        return f"{left}{render_fraction(self.lo)}, {render_fraction(self.hi)}{right}"


def _window_box(grid: Grid, windows: Sequence[Window]) -> PointSet:
    sides = [w.integers(grid.low, grid.high) for w in windows]
    return PointSet.from_points(grid, product(*sides))


@dataclass
class CornerConstruction:
    spec: EquationSpec
    v: Point
    a: Fraction
    a_windows: list[list[Window]]
    b_windows: list[list[Window]]
    a_sets: list[PointSet]
    b_sets: list[PointSet]

    @property
    def k(self) -> int:
        return self.spec.k

    def all_sets(self) -> list[PointSet]:
        return self.a_sets + self.b_sets

    def pairwise_disjoint(self) -> bool:
        return all(X.isdisjoint(Y) for X, Y in combinations(self.all_sets(), 2))

    def lower_bound(self) -> int:
        """Product of ``C(|A_l|, h-1)``: distinct choices give distinct solutions through v."""
        h = self.spec.h
        return math.prod(math.comb(len(S), h - 1) for S in self.a_sets)

    def to_json(self) -> dict:
        def block(name, windows, S):
            return {"name": name, "windows": [w.render() for w in windows], "size": len(S)}

        return {"v": list(self.v), "a": render_fraction(self.a),
                "sets": [block(f"A{l}", w, S) for l, (w, S) in enumerate(zip(self.a_windows, self.a_sets), 1)]
                + [block(f"B{l}", w, S) for l, (w, S) in enumerate(zip(self.b_windows, self.b_sets), 2)],
                "pairwise_disjoint": self.pairwise_disjoint(),
                "lower_bound": self.lower_bound()}


def _a_window(l: int, an: Fraction, n: int, low_corner: bool) -> Window:
    """Window for ``A_l`` in one coordinate.

    A corner coordinate equal to 1 puts the ``A`` windows near ``n``; a
    coordinate equal to ``n`` puts them near 1.
    """
    if low_corner:
        if l == 1:
            return Window(n - an, True, Fraction(n), False)
        return Window(n - (2 * l - 1) * an, True, n - (2 * l - 2) * an, False)
    if l == 1:
        return Window(Fraction(1), False, an, True)
    return Window((2 * l - 2) * an, False, (2 * l - 1) * an, True)


def _b_window(l: int, an: Fraction, n: int, h: int, low_corner: bool) -> Window:
    if low_corner:
        return Window(1 + (h - 1) * (2 * l - 3) * an, True, 1 + (h - 1) * (2 * l - 1) * an, True)
    return Window(n + h - 1 - (h - 1) * (2 * l - 1) * an, True, n - (h - 1) * (2 * l - 3) * an, True)


def build_corner_sets(v: Sequence[int], spec: EquationSpec) -> CornerConstruction:
    """Corner windows with ``a = 1/(2h(2k-1))``, clipped to ``[1, n]``."""
    h = spec.require_symmetric()
    k, n = spec.k, spec.n
    if spec.ambient is not Ambient.BOX:
        raise DomainError("corner windows are defined on the box")
    grid = spec.grid
    v = grid.check(v)
    if any(c not in (1, n) for c in v):
        raise DomainError(f"corner point needs every coordinate in {{1, {n}}}, got {v}")
    a = Fraction(1, 2 * h * (2 * k - 1))
    an = a * n
    if an < 2:
        raise ConstructionError(f"a*n = {render_fraction(an)} < 2: windows are too thin at n={n}")
    a_windows = [[_a_window(l, an, n, c == 1) for c in v] for l in range(1, k + 1)]
    b_windows = [[_b_window(l, an, n, h, c == 1) for c in v] for l in range(2, k + 1)]
    a_sets = [_window_box(grid, w) for w in a_windows]
    b_sets = [_window_box(grid, w) for w in b_windows]
    return CornerConstruction(spec, v, a, a_windows, b_windows, a_sets, b_sets)


@dataclass
class ForcingReport:
    samples: int
    passes: int
    seed: int

    def to_json(self) -> dict:
        return {"samples": self.samples, "passes": self.passes, "seed": self.seed}


def forcing_property_check(cc: CornerConstruction, samples: int, seed: int = DEFAULT_SEED) -> ForcingReport:
    """Sample choices from the ``A`` windows and check each forced point lands in its ``B`` window.

    Each sample also checks that the completed configuration is a genuine
    solution through ``v`` with all points distinct and inside the grid.
    """
    spec, grid, h, k = cc.spec, cc.spec.grid, cc.spec.h, cc.k
    rng = random.Random(seed)
    pools = [list(S.points) for S in cc.a_sets]
    for l, pool in enumerate(pools, 1):
        if samples and len(pool) < h - 1:
            raise ConstructionError(f"A{l} has {len(pool)} points, fewer than h-1 = {h - 1}")
    passes = 0
    for it in range(samples):
        picks = [rng.sample(pool, h - 1) for pool in pools]
        s1 = tuple(c + sum(p[i] for p in picks[0]) for i, c in enumerate(cc.v))
        pts = {cc.v, *picks[0]}
        for l in range(2, k + 1):
            sl = tuple(sum(p[i] for p in picks[l - 1]) for i in range(spec.d))
            x = tuple(a - b for a, b in zip(s1, sl))
            if not all(grid.low <= c <= grid.high for c in x):
                raise PropertyViolation(f"sample {it}: forced point {x} of group {l} left the grid")
            if x not in cc.b_sets[l - 2]:
                raise PropertyViolation(f"sample {it}: forced point {x} is not in B{l}")
            if grid.add([x, *picks[l - 1]]) != grid.add([cc.v, *picks[0]]):
                raise PropertyViolation(f"sample {it}: group {l} sum mismatch")
            pts.update([x, *picks[l - 1]])
        if len(pts) != k * h:
            raise PropertyViolation(f"sample {it}: completed configuration repeats a point")
        passes += 1
    return ForcingReport(samples, passes, seed)


@dataclass
class SubgridMap:
    """A half-size box ``F`` inside ``[n]^d`` and its translation onto ``[m]^d``."""

    grid: Grid
    side: int
    shift: tuple[int, ...]
    window: PointSet
    v: Point
    corner: Point

    @property
    def small_grid(self) -> Grid:
        return Grid(Ambient.BOX, self.grid.d, self.side)

    def to_small(self, p: Sequence[int]) -> Point:
        return tuple(c - s for c, s in zip(p, self.shift))

    def from_small(self, p: Sequence[int]) -> Point:
        return tuple(c + s for c, s in zip(p, self.shift))

    def image(self, S: PointSet) -> PointSet:
        """Image of ``S & F`` in the small grid."""
        return PointSet.from_points(self.small_grid, (self.to_small(p) for p in (S & self.window).points))


def shifted_subgrid(A: PointSet, v: Sequence[int], spec: EquationSpec) -> SubgridMap:
    """Box of side ``floor(n/2)`` that has ``v`` as a corner and stays inside ``[n]^d``.

    Coordinates with ``v(j) <= floor(n/2)`` extend upward from ``v(j)``, the
    others downward, so ``v`` maps to 1 or ``floor(n/2)`` respectively.
    """
    grid = spec.grid
    if grid.ambient is not Ambient.BOX:
        raise DomainError("shifted subgrids are defined on the box")
    v = grid.check(v)
    if v not in A:
        raise DomainError(f"point {v} is not in the set")
    m = spec.n // 2
    if m < 1:
        raise ConstructionError("n must be at least 2 for a half-size subgrid")
    sides, shift, corner = [], [], []
    for c in v:
        if c <= m:
            sides.append(range(c, c + m))
            shift.append(c - 1)
            corner.append(1)
        else:
            sides.append(range(c - m + 1, c + 1))
            shift.append(c - m)
            corner.append(m)
    F = PointSet.from_points(grid, product(*sides))
    return SubgridMap(grid, m, tuple(shift), F, v, tuple(corner))


def _two_groups(spec: EquationSpec) -> tuple[int, int]:
    if spec.k != 2:
        raise DomainError(f"need exactly two groups, got {spec.groups}")
    if spec.ambient is not Ambient.BOX:
        raise DomainError("the solution-free constructions live on the box")
    return spec.groups


def solution_free_ratio_set(spec: EquationSpec) -> PointSet:
    """``{ceil(h1 n / h2) + 1, ..., n}^d`` for group sizes ``h1 < h2``.

    Any ``h2`` of its points sum to more than ``h1 n`` in every coordinate,
    while any ``h1`` points sum to at most ``h1 n``.
    """
    g1, g2 = _two_groups(spec)
    if g1 == g2:
        raise DomainError(f"group sizes must differ, got {spec.groups}")
    h1, h2 = min(g1, g2), max(g1, g2)
    start = -(-h1 * spec.n // h2) + 1
    if start > spec.n:
        raise ConstructionError(f"ceil({h1}n/{h2}) + 1 = {start} exceeds n = {spec.n}")
    return PointSet.interval(spec.grid, start, spec.n)


def odd_coordinate_set(spec: EquationSpec) -> PointSet:
    """Points with every coordinate odd, for one odd and one even group size."""
    g1, g2 = _two_groups(spec)
    if (g1 % 2) == (g2 % 2):
        raise DomainError(f"need one odd and one even group size, got {spec.groups}")
    side = range(1, spec.n + 1, 2)
    return PointSet.from_points(spec.grid, product(side, repeat=spec.d))


@dataclass
class SolutionFreeCheck:
    """Evidence that a point set has no solution of a two-group equation."""

    method: str
    solutions: int
    shared_sums: int

    @property
    def solution_free(self) -> bool:
        return self.solutions == 0

    def to_json(self) -> dict:
        return {"method": self.method, "solutions": self.solutions,
                "shared_sums": self.shared_sums, "solution_free": self.solution_free}


def sums_of(S: PointSet, size: int) -> set[Point]:
    """All sums of ``size``-subsets, by direct enumeration."""
    g = S.grid
    return {g.add(c) for c in combinations(S.points, size)}


def check_solution_free(S: PointSet, spec: EquationSpec, method: str = "auto", *,
                        budget: int = DEFAULT_BUCKET_BUDGET) -> SolutionFreeCheck:
    """Certify ``f = 0`` for a two-group equation.

    ``enumerate`` compares the sets of subset sums directly, ``table`` uses
    subset-sum tables, ``buckets`` runs the solution engine.  When the two
    sum sets are disjoint no solution can exist; if they meet, the solution
    engine decides.
    """
    g1, g2 = _two_groups(spec)
    if method == "auto":
        method = "buckets" if math.comb(len(S), max(g1, g2)) <= budget else "table"
    if method == "buckets":
        return SolutionFreeCheck(method, count_solutions(S, spec, materialize=False, budget=budget).count,
                                 -1)
    if method == "enumerate":
        shared = sums_of(S, g1) & sums_of(S, g2)
    elif method == "table":
        cells = (max(g1, g2) * spec.n + 1) ** spec.d * (max(g1, g2) + 1)
        shared = set(multiplicity_map(S, g1, budget=cells).counts) & \
            set(multiplicity_map(S, g2, budget=cells).counts)
    else:
        raise DomainError(f"unknown method {method!r}")
    if not shared:
        return SolutionFreeCheck(method, 0, 0)
    f = count_solutions(S, spec, materialize=False, budget=budget).count
    return SolutionFreeCheck(method, f, len(shared))
