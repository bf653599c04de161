"""Naive reference implementations.

Everything here enumerates straight from the definitions, with no buckets,
pruning or symmetry tricks.  The fast engines are tested against these, so
this module deliberately shares no counting code with them.  Only use it
at tiny sizes.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations, permutations, product
from typing import Sequence

from .grid import EquationSpec, Point, PointSet


def _splits(points: Sequence[Point], groups: Sequence[int]):
    """Yield every ordered split of ``points`` into groups of the given sizes."""
    if not groups:
        yield ()
        return
    for first in combinations(range(len(points)), groups[0]):
        rest = [p for i, p in enumerate(points) if i not in first]
        for tail in _splits(rest, groups[1:]):
            yield (tuple(points[i] for i in first),) + tail


def has_split(points: Sequence[Point], spec: EquationSpec, first: Point | None = None) -> bool:
    """Whether ``points`` splits into equal-sum groups (``first`` forced into group 1)."""
    g = spec.grid
    for split in _splits(list(points), list(spec.groups)):
        if first is not None and first not in split[0]:
            continue
        if len({g.add(grp) for grp in split}) == 1:
            return True
    return False


def solution_sets(A: PointSet, spec: EquationSpec) -> list[tuple[Point, ...]]:
    """All solution sets, each as a sorted tuple of points."""
    return [X for X in combinations(A.points, spec.total) if has_split(X, spec)]


def multiplicity(A: PointSet, h: int) -> dict[Point, int]:
    c = Counter(A.grid.add(S) for S in combinations(A.points, h))
    return dict(sorted(c.items()))


def equal_sum_families(A: PointSet, spec: EquationSpec) -> int:
    """k-sets of distinct h-subsets that share a sum (overlaps allowed)."""
    g, h, k = spec.grid, spec.h, spec.k
    subsets = list(combinations(A.points, h))
    return sum(1 for fam in combinations(subsets, k) if len({g.add(S) for S in fam}) == 1)


def repeated_tuples(A: PointSet, spec: EquationSpec) -> int:
    """Ordered kh-tuples with equal group sums and some point used twice."""
    g, h, k = spec.grid, spec.h, spec.k
    count = 0
    for t in product(A.points, repeat=k * h):
        if len(set(t)) == k * h:
            continue
        if len({g.add(t[i * h:(i + 1) * h]) for i in range(k)}) == 1:
            count += 1
    return count


def through_point(A: PointSet, v: Point, spec: EquationSpec) -> list[tuple[Point, ...]]:
    rest = [p for p in A.points if p != v]
    return [F for F in combinations(rest, spec.total - 1) if has_split((v,) + F, spec, first=v)]


def cross_sets(A1: PointSet, A2: PointSet, j: int, spec: EquationSpec) -> list[tuple[Point, ...]]:
    """Sets with a split whose every group has j points of A1 and h - j of A2."""
    g, h = spec.grid, spec.h
    U = sorted(A1.points + A2.points)
    out = []
    for X in combinations(U, spec.total):
        for split in _splits(list(X), list(spec.groups)):
            if all(sum(p in A1 for p in grp) == j for grp in split) and \
                    len({g.add(grp) for grp in split}) == 1:
                out.append(X)
                break
    return out


def is_rainbow(colors: Sequence[int]) -> bool:
    return len(set(colors)) == len(colors)


def colorings(A: PointSet, spec: EquationSpec, sols=None) -> tuple[int, dict[int, int]]:
    """(rainbow-free count, histogram by number of colors used) by full enumeration."""
    r = spec.require_colors()
    if sols is None:
        sols = solution_sets(A, spec)
    pos = {p: i for i, p in enumerate(A.points)}
    idx = [[pos[p] for p in X] for X in sols]
    hist: Counter = Counter()
    for c in product(range(1, r + 1), repeat=len(A)):
        if not any(is_rainbow([c[i] for i in X]) for X in idx):
            hist[len(set(c))] += 1
    return sum(hist.values()), dict(sorted(hist.items()))


def rainbow_assignments(palettes: Sequence[int]) -> int:
    """Ways to pick distinct colors, one from each bitmask palette."""
    lists = [[c for c in range(palettes_bit_length(palettes)) if m >> c & 1] for m in palettes]
    return sum(1 for pick in product(*lists) if is_rainbow(pick))


def palettes_bit_length(palettes: Sequence[int]) -> int:
    return max((m.bit_length() for m in palettes), default=0)


def template_rainbow_count(palettes: Sequence[int], A: PointSet, sols) -> int:
    pos = {p: i for i, p in enumerate(A.points)}
    return sum(rainbow_assignments([palettes[pos[p]] for p in X]) for X in sols)


def template_colorings(palettes: Sequence[int], A: PointSet, sols) -> int:
    pos = {p: i for i, p in enumerate(A.points)}
    idx = [[pos[p] for p in X] for X in sols]
    width = palettes_bit_length(palettes)
    lists = [[c for c in range(width) if m >> c & 1] for m in palettes]
    return sum(1 for c in product(*lists)
               if not any(is_rainbow([c[i] for i in X]) for X in idx))


def hypergraph_edges(A: PointSet, spec: EquationSpec, sols=None) -> list[frozenset]:
    """Edges as frozensets of (point, color): rainbow colorings of solution sets."""
    r = spec.require_colors()
    if sols is None:
        sols = solution_sets(A, spec)
    edges = []
    for X in sols:
        for cols in permutations(range(1, r + 1), len(X)):
            edges.append(frozenset(zip(X, cols)))
    return edges


def max_codegrees(edges: list[frozenset], uniformity: int) -> dict[int, int]:
    """Max number of edges through a j-vertex set, by tallying every j-subset of every edge."""
    out = {}
    for j in range(2, uniformity + 1):
        tally = Counter(frozenset(U) for e in edges for U in combinations(sorted(e), j))
        out[j] = max(tally.values(), default=0)
    return out
