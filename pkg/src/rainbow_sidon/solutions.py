"""Enumerating and counting solution sets of the equal-sum equation.

A solution set is a set of ``sum(groups)`` distinct points that can be
split into groups of the prescribed sizes with equal coordinatewise sums.
Counting goes through sum buckets: every ``h``-subset of ``A`` is filed
under its sum, and solution sets are pairwise-disjoint selections from one
bucket.  Naive reference implementations live in :mod:`.oracle`.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError
from .grid import Ambient, EquationSpec, Grid, Point, PointSet
from .parallel import pmap

#: Default cap on the number of subsets filed into sum buckets.
DEFAULT_BUCKET_BUDGET = 10**6


@dataclass(frozen=True, order=True)
class Solution:
    """A solution set in canonical form: sorted ranks plus one witness split.

    Equality and ordering look at ``points`` only; a set with several
    valid splits is still one solution.
    """

    points: tuple[int, ...]
    witness: tuple[tuple[int, ...], ...] = field(compare=False, default=())

    def coords(self, grid: Grid) -> list[Point]:
        return [grid.unrank(r) for r in self.points]

    def group_labels(self) -> str:
        """Group index (1-based) of each point, in the order of ``points``."""
        where = {r: g for g, grp in enumerate(self.witness, 1) for r in grp}
        return "".join(str(where[r]) for r in self.points)

    def validate(self, spec: EquationSpec) -> None:
        grid = spec.grid
        if list(self.points) != sorted(set(self.points)):
            raise DomainError(f"points {self.points} are not sorted and distinct")
        if sorted(r for g in self.witness for r in g) != list(self.points):
            raise DomainError("witness does not partition the points")
        if sorted(len(g) for g in self.witness) != sorted(spec.groups):
            raise DomainError(f"witness group sizes do not match {spec.groups}")
        sums = {grid.add(grid.unrank(r) for r in g) for g in self.witness}
        if len(sums) != 1:
            raise DomainError(f"witness groups have different sums {sums}")


class _Sums:
    """Integer codes for points such that code(sum) = sum(codes).

    Each coordinate is a digit in base ``hmax * n + 1``, wide enough that
    adding up to ``hmax`` points never carries.  On the torus, codes are
    reduced digit by digit modulo ``n``.
    """

    def __init__(self, A: PointSet, hmax: int):
        g = A.grid
        self.d, self.n = g.d, g.n
        self.torus = g.ambient is Ambient.TORUS
        self.base = hmax * g.n + 1
        self.keys = [self.encode(p) for p in A.points]

    def encode(self, p: Sequence[int]) -> int:
        code = 0
        for c in p:
            code = code * self.base + c
        return code

    def decode(self, code: int) -> Point:
        out = []
        for _ in range(self.d):
            code, c = divmod(code, self.base)
            out.append(c)
        return tuple(reversed(out))

    def reduce(self, code: int) -> int:
        if not self.torus:
            return code
        return self.encode(c % self.n for c in self.decode(code))


def _subset_buckets(keys, items, size, sums: _Sums, budget) -> dict[int, list]:
    """File every ``size``-subset of ``items`` (indices into ``keys``) by its sum.

    Entries are ``(bitmask, index tuple)``.
    """
    total = math.comb(len(items), size)
    if total > budget:
        raise CapacityError(
            f"{total} subsets of size {size} exceed the bucket budget {budget}; shrink n or |A|")
    out: dict[int, list] = {}
    reduce = sums.reduce
    for combo in combinations(items, size):
        s = reduce(sum(keys[i] for i in combo))
        mask = 0
        for i in combo:
            mask |= 1 << i
        out.setdefault(s, []).append((mask, combo))
    return out


def _families(task):
    """Pick one entry per list, pairwise disjoint, from lists of ``(mask, combo)``.

    ``same`` marks a list that is interchangeable with its predecessor; picks
    from such a list must have a larger index, so each unordered family is
    produced once.  Returns (number of families, {union mask: witness}).
    """
    lists, same, used0 = task
    k = len(lists)
    found: dict[int, tuple] = {}
    chosen: list = [None] * k
    families = 0

    def rec(level, start, used):
        nonlocal families
        if level == k:
            families += 1
            if used not in found:
                found[used] = tuple(chosen)
            return
        lst = lists[level]
        for i in range(start if same[level] else 0, len(lst)):
            mask, combo = lst[i]
            if mask & used:
                continue
            chosen[level] = combo
            rec(level + 1, i + 1, used | mask)

    rec(0, 0, used0)
    return families, found


def _run_families(tasks, workers):
    """Run family searches and merge unions in task order (first witness wins)."""
    results = pmap(_families, tasks, workers)
    merged: dict[int, tuple] = {}
    families = 0
    for fam, found in results:
        families += fam
        for union, wit in found.items():
            merged.setdefault(union, wit)
    return families, merged


def _to_solutions(merged, ranks, used0=0) -> list[Solution]:
    out = []
    for union, wit in merged.items():
        union &= ~used0
        pts = []
        while union:
            low = union & -union
            pts.append(ranks[low.bit_length() - 1])
            union ^= low
        groups = tuple(tuple(ranks[i] for i in combo) for combo in wit)
        out.append(Solution(tuple(pts), groups))
    out.sort()
    return out


@dataclass
class MultiplicityMap:
    """Number of ``h``-subsets of a point set with each coordinatewise sum."""

    h: int
    counts: dict[Point, int]
    source: str

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, s: Point) -> int:
        return self.counts.get(tuple(s), 0)

    def __len__(self) -> int:
        return len(self.counts)

    def to_json(self) -> dict:
        return {"h": self.h, "source": self.source,
                "counts": [[list(s), c] for s, c in sorted(self.counts.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "MultiplicityMap":
        return cls(int(data["h"]), {tuple(s): int(c) for s, c in data["counts"]}, data["source"])


def multiplicity_map(A: PointSet, h: int, budget: int = DEFAULT_BUCKET_BUDGET) -> MultiplicityMap:
    """Count ``h``-subsets of ``A`` by sum with a subset-sum table.

    The table has one axis per coordinate (``h n + 1`` cells on the box,
    ``n`` on the torus) and one layer per subset size; each point is folded
    in once, so subsets never repeat a point.
    """
    if h < 1:
        raise DomainError(f"h must be at least 1, got {h}")
    g = A.grid
    torus = g.ambient is Ambient.TORUS
    side = g.n if torus else h * g.n + 1
    cells = side**g.d * (h + 1)
    if cells > budget:
        raise CapacityError(f"sum table needs {cells} cells, bucket budget is {budget}")
    dtype = np.int64 if math.comb(len(A), h) < 2**62 else object
    dp = np.zeros((h + 1,) + (side,) * g.d, dtype=dtype)
    dp[(0,) + (0,) * g.d] = 1
    for i, p in enumerate(A.points):
        for j in range(min(h, i + 1), 0, -1):
            if torus:
                dp[j] += np.roll(dp[j - 1], shift=p, axis=tuple(range(g.d)))
            else:
                dst = (j,) + tuple(slice(c, None) for c in p)
                src = (j - 1,) + tuple(slice(0, side - c) for c in p)
                dp[dst] += dp[src]
    layer = dp[h]
    counts = {tuple(int(c) for c in idx): int(layer[idx]) for idx in zip(*np.nonzero(layer))}
    return MultiplicityMap(h, dict(sorted(counts.items())), A.digest())


def _ordered_tuple_counts(sums: _Sums, h: int) -> Counter:
    """Ordered ``h``-tuples of points (repeats allowed) by sum code."""
    base = Counter(sums.reduce(k) for k in sums.keys)
    cur = Counter({0: 1})
    for _ in range(h):
        nxt: Counter = Counter()
        for s, c in cur.items():
            for t, e in base.items():
                nxt[sums.reduce(s + t)] += c * e
        cur = nxt
    return cur


@dataclass
class SolutionCensus:
    """Solution count plus the equal-sum bookkeeping used by the counting bounds.

    ``equal_sum_families``: sets of ``k`` distinct ``h``-subsets sharing a sum
    (not necessarily disjoint).  ``repeated_tuples``: ordered ``kh``-tuples
    with equal group sums and some point used twice.  ``partitions``: pairs
    (solution set, unordered split).  The last three are ``None`` for
    unequal group sizes.
    """

    count: int
    equal_sum_families: int | None
    repeated_tuples: int | None
    partitions: int | None
    solutions: list[Solution] | None = None

    def to_json(self) -> dict:
        return {"count": self.count, "equal_sum_families": self.equal_sum_families,
                "repeated_tuples": self.repeated_tuples, "partitions": self.partitions}


def _check_grid(A: PointSet, spec: EquationSpec) -> None:
    if A.grid != spec.grid:
        raise DomainError(f"point set grid {A.grid} does not match spec grid {spec.grid}")


def count_solutions(A: PointSet, spec: EquationSpec, *, materialize: bool = True,
                    workers: int = 1, budget: int = DEFAULT_BUCKET_BUDGET) -> SolutionCensus:
    """Count distinct solution sets in ``A``.

    Buckets are searched independently (optionally in parallel) and merged
    in increasing sum order, so results do not depend on ``workers``.
    """
    _check_grid(A, spec)
    groups = sorted(spec.groups)
    sums = _Sums(A, max(groups))
    items = list(range(len(A)))
    buckets = {h: _subset_buckets(sums.keys, items, h, sums, budget) for h in set(groups)}
    need = Counter(groups)
    shared = set.intersection(*(set(b) for b in buckets.values()))
    tasks = []
    for s in sorted(shared):
        if all(len(buckets[h][s]) >= c for h, c in need.items()):
            lists = [buckets[h][s] for h in groups]
            same = [i > 0 and groups[i] == groups[i - 1] for i in range(len(groups))]
            tasks.append((lists, same, 0))
    families, merged = _run_families(tasks, workers)
    sols = _to_solutions(merged, A.ranks) if materialize else None

    if not spec.is_symmetric:
        return SolutionCensus(len(merged), None, None, None, sols)
    k, h = spec.k, spec.groups[0]
    m1 = sum(math.comb(len(b), k) for b in buckets[h].values())
    ordered = _ordered_tuple_counts(sums, h)
    all_tuples = sum(c**k for c in ordered.values())
    distinct = families * math.factorial(k) * math.factorial(h) ** k
    return SolutionCensus(len(merged), m1, all_tuples - distinct, families, sols)


def repeated_tuple_bound(size: int, k: int, h: int) -> int:
    """Role-fixing overcount of equal-sum tuples with a repeated point."""
    return math.comb(k * h, 2) * size ** (k * (h - 1))


def solution_upper_bound(size: int, k: int, h: int) -> int:
    return size ** (k * (h - 1) + 1)


def split_count(k: int, h: int) -> int:
    """Ordered ways to split ``kh`` labelled points into ``k`` labelled ``h``-groups."""
    out = 1
    for i in range(k):
        out *= math.comb(k * h - i * h, h)
    return out


def count_cross(A1: PointSet, A2: PointSet, j: int, spec: EquationSpec, *,
                budget: int = DEFAULT_BUCKET_BUDGET) -> int:
    """Solution sets whose groups each take ``j`` points from A1 and the rest from A2.

    A set counts once if at least one of its splits conforms.
    """
    return len(cross_solutions(A1, A2, j, spec, budget=budget))


def cross_solutions(A1: PointSet, A2: PointSet, j: int, spec: EquationSpec, *,
                    budget: int = DEFAULT_BUCKET_BUDGET) -> list[Solution]:
    h = spec.require_symmetric()
    _check_grid(A1, spec)
    _check_grid(A2, spec)
    if not A1.isdisjoint(A2):
        raise DomainError("the two point sets overlap")
    if not 1 <= j <= h - 1:
        raise DomainError(f"need 1 <= j <= h-1 = {h - 1}, got j={j}")
    U = A1 | A2
    sums = _Sums(U, h)
    idx1 = [U.index[r] for r in A1.ranks]
    idx2 = [U.index[r] for r in A2.ranks]
    total = math.comb(len(idx1), j) * math.comb(len(idx2), h - j)
    if total > budget:
        raise CapacityError(f"{total} mixed subsets exceed the bucket budget {budget}")
    bucket: dict[int, list] = {}
    for c1 in combinations(idx1, j):
        s1 = sum(sums.keys[i] for i in c1)
        m1 = sum(1 << i for i in c1)
        for c2 in combinations(idx2, h - j):
            s = sums.reduce(s1 + sum(sums.keys[i] for i in c2))
            bucket.setdefault(s, []).append((m1 | sum(1 << i for i in c2), c1 + c2))
    k = spec.k
    same = [i > 0 for i in range(k)]
    tasks = [([lst] * k, same, 0) for s, lst in sorted(bucket.items()) if len(lst) >= k]
    _, merged = _run_families(tasks, 1)
    return _to_solutions(merged, U.ranks)


@dataclass
class ThroughPoint:
    """Solution sets through a fixed point, with that point removed."""

    count: int
    family: list[tuple[int, ...]]


def count_through_point(A: PointSet, v: Sequence[int], spec: EquationSpec, *,
                        budget: int = DEFAULT_BUCKET_BUDGET) -> ThroughPoint:
    """Sets ``F`` in ``A - {v}`` such that ``{v} | F`` splits with ``v`` in the first group."""
    _check_grid(A, spec)
    v = spec.grid.check(v)
    if v not in A:
        raise DomainError(f"point {v} is not in the set")
    vi = A.index[spec.grid.rank(v)]
    h1, others = spec.groups[0], sorted(spec.groups[1:])
    sums = _Sums(A, max(spec.groups))
    rest = [i for i in range(len(A)) if i != vi]
    buckets = {h: _subset_buckets(sums.keys, rest, h, sums, budget) for h in set(others)}
    if math.comb(len(rest), h1 - 1) > budget:
        raise CapacityError("too many first-group completions for the bucket budget")
    vkey = sums.keys[vi]
    same = [i > 0 and others[i] == others[i - 1] for i in range(len(others))]
    tasks = []
    for T in combinations(rest, h1 - 1):
        s = sums.reduce(vkey + sum(sums.keys[i] for i in T))
        lists = [buckets[h].get(s, ()) for h in others]
        if all(lists):
            used = (1 << vi) | sum(1 << i for i in T)
            tasks.append((lists, same, used))
    _, merged = _run_families(tasks, 1)
    family = sorted({tuple(A.ranks[i] for i in _bits(u & ~(1 << vi))) for u in merged})
    return ThroughPoint(len(family), family)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass
class DisjointFamily:
    members: list[tuple[int, ...]]
    max_degree: int
    lower_bound: int

    @property
    def holds(self) -> bool:
        return len(self.members) >= self.lower_bound


def greedy_disjoint_family(family: Iterable[Sequence[int]], v: int) -> DisjointFamily:
    """Greedy pairwise-disjoint subfamily, scanning members in sorted order.

    ``v`` is the rank of the removed point.  Each kept member blocks at most
    ``size * max_degree`` members, which gives the reported lower bound
    ``ceil(|family| / (1 + size * max_degree))``.
    """
    members = sorted(tuple(sorted(f)) for f in family)
    sizes = {len(f) for f in members}
    if len(sizes) > 1:
        raise DomainError(f"family members have different sizes {sorted(sizes)}")
    for f in members:
        if v in f:
            raise DomainError(f"member {f} contains the removed point {v}")
    degree = Counter(u for f in members for u in f)
    maxdeg = max(degree.values(), default=0)
    size = sizes.pop() if sizes else 0
    kept, used = [], set()
    for f in members:
        if used.isdisjoint(f):
            kept.append(f)
            used.update(f)
    bound = -(-len(members) // (1 + size * maxdeg)) if members else 0
    return DisjointFamily(kept, maxdeg, bound)


class Parallelogram(str, enum.Enum):
    DEGENERATE = "degenerate"
    NONDEGENERATE = "nondegenerate"


def _require_parallelogram_spec(spec: EquationSpec) -> None:
    if spec.d < 2 or tuple(spec.groups) != (2, 2):
        raise DomainError(f"parallelogram checks need d >= 2 and groups (2, 2), got "
                          f"d={spec.d}, groups={spec.groups}")


def collinear(points: Sequence[Point]) -> bool:
    """Exact test: all difference vectors have rank at most one."""
    p0 = points[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in points[1:]]
    for u, w in combinations(diffs, 2):
        for a, b in combinations(range(len(p0)), 2):
            if u[a] * w[b] - u[b] * w[a]:
                return False
    return True


def classify_parallelogram(sol: Solution, spec: EquationSpec) -> Parallelogram:
    _require_parallelogram_spec(spec)
    if collinear(sol.coords(spec.grid)):
        return Parallelogram.DEGENERATE
    return Parallelogram.NONDEGENERATE


@dataclass
class DegenerateReport:
    degenerate: int
    nondegenerate: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.degenerate <= self.bound

    def to_json(self) -> dict:
        return {"degenerate": self.degenerate, "nondegenerate": self.nondegenerate,
                "bound": self.bound, "holds": self.holds}


def degenerate_count_bound_check(A: PointSet, spec: EquationSpec, *,
                                 solutions: list[Solution] | None = None) -> DegenerateReport:
    """Count collinear solutions and compare with ``|A|^2 n``."""
    _require_parallelogram_spec(spec)
    if solutions is None:
        solutions = count_solutions(A, spec).solutions
    kinds = Counter(classify_parallelogram(s, spec) for s in solutions)
    return DegenerateReport(kinds[Parallelogram.DEGENERATE], kinds[Parallelogram.NONDEGENERATE],
                            len(A) ** 2 * spec.n)


def solutions_csv(solutions: Iterable[Solution], grid: Grid) -> str:
    """One row per solution: space-separated point tuples and the group labels."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["points", "groups"])
    for s in solutions:
        pts = " ".join("(" + ",".join(map(str, p)) + ")" for p in s.coords(grid))
        w.writerow([pts, s.group_labels()])
    return buf.getvalue()
