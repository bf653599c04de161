"""Exact counting of colorings without rainbow solution sets.

A solution set is rainbow when its points get pairwise distinct colors.
Counting exploits color symmetry: points are colored in rank order with
canonical labels (a new label is always the next unused one), and a labelled
coloring with ``m`` labels stands for ``r (r-1) ... (r-m+1)`` actual colorings.
A branch is cut as soon as a solution set is completely colored and rainbow.
Once no solution set closes at a later point, the remaining points are
counted in closed form.

Deviation counting splits the colors into a designated set ``C`` and the
rest, with canonical labels kept separately inside each class.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import CapacityError, DomainError
from .exact import falling, render_fraction, to_decimal
from .grid import EquationSpec, PointSet
from .parallel import pmap
from .solutions import DEFAULT_BUCKET_BUDGET, Solution, count_solutions

#: Default cap on backtracking nodes.
DEFAULT_COLORING_BUDGET = 10**7

#: Points labelled in the driver before work is handed to workers.
SPLIT_DEPTH = 5


def is_rainbow_free(colors: Sequence[int], solutions: Sequence[Solution], A: PointSet) -> bool:
    """True iff no solution set gets pairwise distinct colors.

    ``colors`` is indexed like ``A.ranks``; the witness split plays no role.
    """
    if len(colors) != len(A):
        raise DomainError(f"coloring has {len(colors)} entries, the set has {len(A)} points")
    pos = A.index
    for sol in solutions:
        cols = {colors[pos[p]] for p in sol.points}
        if len(cols) == len(sol.points):
            return False
    return True


def closing_lists(solutions: Sequence[Solution], A: PointSet) -> list[list[tuple[int, ...]]]:
    """For each position in ``A``, the solution sets whose largest point sits there."""
    pos = A.index
    out: list[list[tuple[int, ...]]] = [[] for _ in range(len(A))]
    for sol in solutions:
        idx = tuple(pos[p] for p in sol.points)
        out[max(idx)].append(idx)
    return out


class _Budget(Exception):
    pass


@lru_cache(maxsize=None)
def _free_tail(t: int, ms: tuple[int, ...], classes: tuple[int, ...]) -> tuple:
    """Canonical labellings of ``t`` unconstrained points, given labels used so far.

    Returns ((final label counts, points placed in class 1), number) pairs.
    """
    if t == 0:
        return (((ms, 0), 1),)
    acc: Counter = Counter()
    for cls, size in enumerate(classes):
        used = ms[cls]
        bump = 1 if cls == 1 else 0
        if used:
            for (fin, dev), c in _free_tail(t - 1, ms, classes):
                acc[(fin, dev + bump)] += used * c
        if used < size:
            nxt = ms[:cls] + (used + 1,) + ms[cls + 1:]
            for (fin, dev), c in _free_tail(t - 1, nxt, classes):
                acc[(fin, dev + bump)] += c
    return tuple(sorted(acc.items()))


def _search(task):
    """Backtrack from a partial labelling; returns (leaf counter, nodes).

    A closing set whose other points already carry distinct labels is
    rainbow unless the new point repeats one of them, so the allowed labels
    at a point are the intersection of those label sets.
    """
    closing, classes, labels, ms, dev, budget = task
    n = len(closing)
    labels = list(labels) + [0] * (n - len(labels))
    ms = list(ms)
    last = max((i for i in range(n) if closing[i]), default=-1)
    others = [[tuple(j for j in sol if j != i) for sol in closing[i]] for i in range(n)]
    counts: Counter = Counter()
    nodes = 0

    def rec(i, dev):
        nonlocal nodes
        if i > last:
            for (fin, extra), c in _free_tail(n - i, tuple(ms), classes):
                counts[(fin, dev + extra)] += c
            return
        nodes += 1
        if nodes > budget:
            raise _Budget
        allowed = None
        for rest in others[i]:
            labs = {labels[j] for j in rest}
            if len(labs) == len(rest):
                allowed = labs if allowed is None else allowed & labs
                if not allowed:
                    return
        for cls, size in enumerate(classes):
            used = ms[cls]
            top = used + 1 if used < size else used
            base = cls << 16
            for lab in range(top):
                label = base + lab
                if allowed is not None and label not in allowed:
                    continue
                labels[i] = label
                if lab == used:
                    ms[cls] += 1
                    rec(i + 1, dev + (cls == 1))
                    ms[cls] -= 1
                else:
                    rec(i + 1, dev + (cls == 1))

    try:
        rec(len(task[2]), dev)
    except _Budget:
        return None, nodes
    return counts, nodes


def _prefixes(closing, classes, depth):
    """Valid canonical labellings of the first ``depth`` points."""
    out = []
    labels: list[int] = []
    ms = [0] * len(classes)

    def rec(i, dev):
        if i == depth:
            out.append((tuple(labels), tuple(ms), dev))
            return
        for cls, size in enumerate(classes):
            used = ms[cls]
            top = used + 1 if used < size else used
            for lab in range(top):
                labels.append((cls << 16) + lab)
                ok = all(len({labels[j] for j in sol}) < len(sol) for sol in closing[i])
                if ok:
                    if lab == used:
                        ms[cls] += 1
                    rec(i + 1, dev + (cls == 1))
                    if lab == used:
                        ms[cls] -= 1
                labels.pop()

    rec(0, 0)
    return out


def labelled_census(closing, classes: Sequence[int], *, workers: int = 1,
                    budget: int = DEFAULT_COLORING_BUDGET) -> Counter:
    """Count canonical labellings with no rainbow closing set.

    Keys are (labels used per class, points in class 1); values are counts
    of labellings, not yet multiplied by the number of actual colorings.
    """
    classes = tuple(classes)
    n = len(closing)
    depth = min(n, SPLIT_DEPTH) if workers > 1 else 0
    tasks = [(closing, classes, lab, ms, dev, budget)
             for lab, ms, dev in _prefixes(closing, classes, depth)]
    total: Counter = Counter()
    nodes = 0
    for counts, used in pmap(_search, tasks, workers):
        nodes += used
        if counts is None or nodes > budget:
            raise CapacityError(f"coloring search exceeded the node budget {budget}; "
                                f"raise --budget-colorings or shrink the set")
        total.update(counts)
    return total


def _surjections(size: int, m: int) -> int:
    return sum((-1) ** i * math.comb(m, i) * (m - i) ** size for i in range(m + 1))


def lower_bound_value(size: int, k: int, h: int, r: int) -> int:
    """Colorings that use exactly ``kh - 1`` colors, summed over color sets.

    Any such coloring is rainbow-free by pigeonhole, so this bounds the
    rainbow-free count from below.
    """
    return _lower_bound(size, k * h, r)


def _lower_bound(size: int, total: int, r: int) -> int:
    m = total - 1
    if r < m:
        raise DomainError(f"need r >= {m} colors, got r={r}")
    # The i = m term vanishes for nonempty sets; keeping it makes |A| = 0 count 0.
    return math.comb(r, m) * _surjections(size, m)


@dataclass
class ColoringCensus:
    """Rainbow-free coloring count with its breakdown by number of colors used."""

    g: int
    by_palette_size: dict[int, int]
    lower_bound: int | None
    size: int
    r: int
    total: int
    deviation: dict[int, int] | None = field(default=None)

    @property
    def ratio_to_asymptotic(self) -> Fraction | None:
        """``g / (C(r, kh-1) (kh-1)^|A|)``."""
        m = self.total - 1
        if self.r < m or m == 0:
            return None
        return Fraction(self.g, math.comb(self.r, m) * m**self.size)

    @property
    def deviating(self) -> int | None:
        if self.deviation is None:
            return None
        return sum(c for s, c in self.deviation.items() if s > 0)

    def to_json(self) -> dict:
        out = {"g": self.g,
               "by_palette_size": {str(m): c for m, c in sorted(self.by_palette_size.items())},
               "lower_bound": self.lower_bound}
        ratio = self.ratio_to_asymptotic
        if ratio is not None:
            out["ratio_to_asymptotic"] = {"exact": render_fraction(ratio), "approx": to_decimal(ratio)}
        if self.deviation is not None:
            out["deviation_by_size"] = {str(s): c for s, c in sorted(self.deviation.items())}
            out["deviating"] = self.deviating
        return out


def _solutions_for(A, spec, solutions, bucket_budget, workers):
    if solutions is not None:
        return solutions
    return count_solutions(A, spec, workers=workers, budget=bucket_budget).solutions


def count_rainbow_free(A: PointSet, spec: EquationSpec, *, solutions=None, workers: int = 1,
                       budget: int = DEFAULT_COLORING_BUDGET,
                       bucket_budget: int = DEFAULT_BUCKET_BUDGET) -> ColoringCensus:
    """Exact number of ``r``-colorings of ``A`` with no rainbow solution set."""
    r = spec.require_colors()
    if A.grid != spec.grid:
        raise DomainError(f"point set grid {A.grid} does not match spec grid {spec.grid}")
    sols = _solutions_for(A, spec, solutions, bucket_budget, workers)
    leaves = labelled_census(closing_lists(sols, A), (r,), workers=workers, budget=budget)
    hist = Counter()
    for ((m,), _), c in leaves.items():
        hist[m] += c * falling(r, m)
    hist = dict(sorted(hist.items()))
    lb = _lower_bound(len(A), spec.total, r) if r >= spec.total - 1 else None
    return ColoringCensus(sum(hist.values()), hist, lb, len(A), r, spec.total)


def count_rainbow_free_torus(A: PointSet, spec: EquationSpec, **kw) -> ColoringCensus:
    """Same count with solution sets taken modulo ``n``."""
    if spec.ambient.value != "torus" or A.grid.ambient.value != "torus":
        raise DomainError("count_rainbow_free_torus needs a torus equation and point set")
    return count_rainbow_free(A, spec, **kw)


def deviation_census(A: PointSet, spec: EquationSpec, palette_size: int | None = None, *,
                     solutions=None, workers: int = 1, budget: int = DEFAULT_COLORING_BUDGET,
                     bucket_budget: int = DEFAULT_BUCKET_BUDGET) -> dict[int, int]:
    """Rainbow-free colorings by the number of points colored outside a fixed color set.

    The answer depends on the color set only through its size
    (``kh - 1`` by default).
    """
    r = spec.require_colors()
    c = spec.total - 1 if palette_size is None else palette_size
    if not 0 <= c <= r:
        raise DomainError(f"color set size {c} outside [0, {r}]")
    sols = _solutions_for(A, spec, solutions, bucket_budget, workers)
    leaves = labelled_census(closing_lists(sols, A), (c, r - c), workers=workers, budget=budget)
    hist = Counter()
    for ((mc, mo), dev), cnt in leaves.items():
        hist[dev] += cnt * falling(c, mc) * falling(r - c, mo)
    return dict(sorted(hist.items()))


def count_deviating(A: PointSet, C: Sequence[int] | set[int], spec: EquationSpec, **kw) -> int:
    """Rainbow-free colorings giving some point a color outside ``C``."""
    r = spec.require_colors()
    C = set(C)
    if len(C) != spec.total - 1:
        raise DomainError(f"color set must have {spec.total - 1} colors, got {len(C)}")
    if not C <= set(range(1, r + 1)):
        raise DomainError(f"color set {sorted(C)} is not inside [1, {r}]")
    hist = deviation_census(A, spec, len(C), **kw)
    return sum(c for s, c in hist.items() if s > 0)


def census_with_deviation(A: PointSet, spec: EquationSpec, **kw) -> ColoringCensus:
    census = count_rainbow_free(A, spec, **kw)
    census.deviation = deviation_census(A, spec, **kw)
    return census
