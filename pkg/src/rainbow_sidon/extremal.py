"""Exhaustive search for the subsets with the most rainbow-free colorings.

Every subset of a small grid is scored by its exact rainbow-free coloring
count.  The solutions of a subset are exactly the solutions of the full grid
that it contains, so the full grid is solved once and filtered.  The
reflection ``x -> n + 1 - x`` in every coordinate preserves the equation, so
only one subset per reflection orbit is colored and its mirror copies the
score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coloring import DEFAULT_COLORING_BUDGET, count_rainbow_free
from .errors import CapacityError, DomainError
from .exact import render_fraction, to_decimal
from .grid import Ambient, EquationSpec, PointSet, full_grid
from .parallel import pmap
from .solutions import Solution, count_solutions
from .stability import Regime, dense_threshold, size_regime, sparse_threshold

#: Largest grid scanned exhaustively.
MAX_SCAN_POINTS = 16


@dataclass(frozen=True)
class ScanRow:
    A: PointSet
    g: int
    is_full_grid: bool
    regime: Regime

    @property
    def bits(self) -> int:
        return self.A.bits


@dataclass
class ExtremalScan:
    spec: EquationSpec
    rows: list[ScanRow]
    symmetry_reduced: bool

    @property
    def maximum(self) -> int:
        return max(row.g for row in self.rows)

    @property
    def maximizers(self) -> list[ScanRow]:
        best = self.maximum
        return [row for row in self.rows if row.g == best]

    @property
    def full_grid_unique_maximizer(self) -> bool:
        tops = self.maximizers
        return len(tops) == 1 and tops[0].is_full_grid

    def ranking(self) -> list[ScanRow]:
        return sorted(self.rows, key=lambda row: (-row.g, row.bits))

    def to_csv(self) -> str:
        lines = ["bitmask,size,g"]
        lines += [f"{row.bits},{len(row.A)},{row.g}" for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self, top: int = 10) -> dict:
        full = next(row for row in self.rows if row.is_full_grid)
        return {"n": self.spec.n, "d": self.spec.d, "r": self.spec.r,
                "subsets": len(self.rows),
                "full_grid_g": full.g,
                "maximum_g": self.maximum,
                "maximizers": [row.A.to_rle() for row in self.maximizers],
                "full_grid_unique_maximizer": self.full_grid_unique_maximizer,
                "top": [{"set": row.A.to_rle(), "size": len(row.A), "g": row.g,
                         "regime": row.regime.value} for row in self.ranking()[:top]],
                "sparse_max": sparse_threshold(self.spec).to_json(),
                "dense_min": dense_threshold(self.spec).to_json()}


def _score(task) -> int:
    A, spec, sols, budget = task
    return count_rainbow_free(A, spec, solutions=sols, budget=budget).g


def _inside(solutions: Sequence[Solution], bits: int) -> list[Solution]:
    return [s for s in solutions if all(bits >> p & 1 for p in s.points)]


def extremal_scan(spec: EquationSpec, *, workers: int = 1, symmetry: bool = True,
                  budget: int = DEFAULT_COLORING_BUDGET) -> ExtremalScan:
    """Score every subset of the grid, rows in increasing bitmask order."""
    spec.require_colors()
    grid = spec.grid
    if grid.ambient is not Ambient.BOX:
        raise DomainError("the extremal scan runs on the box")
    if grid.size > MAX_SCAN_POINTS:
        raise CapacityError(f"scanning 2^{grid.size} subsets exceeds the cap of "
                            f"2^{MAX_SCAN_POINTS}")
    full = full_grid(grid)
    sols = count_solutions(full, spec).solutions
    todo, mirror = [], {}
    for bits in range(1 << grid.size):
        A = PointSet(grid, bits)
        if symmetry:
            m = A.reflect().bits
            if m < bits:
                mirror[bits] = m
                continue
        todo.append(bits)
    tasks = [(PointSet(grid, b), spec, _inside(sols, b), budget) for b in todo]
    scores = dict(zip(todo, pmap(_score, tasks, workers)))
    rows = []
    for bits in range(1 << grid.size):
        A = PointSet(grid, bits)
        g = scores[mirror.get(bits, bits)]
        rows.append(ScanRow(A, g, bits == full.bits, size_regime(len(A), spec)))
    return ExtremalScan(spec, rows, symmetry)


@dataclass
class TrendPoint:
    n: int
    g: int
    ratio: Fraction

    def to_json(self) -> dict:
        return {"n": self.n, "g": self.g, "ratio": render_fraction(self.ratio),
                "approx": to_decimal(self.ratio)}


@dataclass
class Trend:
    points: list[TrendPoint]

    @property
    def nondecreasing(self) -> bool:
        return all(a.ratio <= b.ratio for a, b in zip(self.points, self.points[1:]))

    @property
    def gap_to_one(self) -> list[Fraction]:
        return [1 - p.ratio for p in self.points]

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points],
                "nondecreasing": self.nondecreasing,
                "final_gap_to_one": to_decimal(self.gap_to_one[-1]) if self.points else None}


def full_grid_trend(spec: EquationSpec, ns: Sequence[int], *, workers: int = 1,
                    budget: int = DEFAULT_COLORING_BUDGET) -> Trend:
    """``g([n]^d) / (C(r, kh-1) (kh-1)^{n^d})`` for each ``n``."""
    r = spec.require_colors()
    m = spec.total - 1
    pts = []
    for n in ns:
        s = spec.with_(n=n)
        census = count_rainbow_free(full_grid(s), s, workers=workers, budget=budget)
        pts.append(TrendPoint(n, census.g, Fraction(census.g, math.comb(r, m) * m ** (n**s.d))))
    return Trend(pts)
