"""Grid points, point sets and the equation description.

Two ambients are supported: the box ``[n]^d`` with 1-based coordinates and
the torus ``Z_n^d`` with 0-based coordinates and addition modulo ``n``.
Points are plain tuples of ints.  A :class:`PointSet` is an immutable
bit-vector over lexicographic ranks, stored as a Python int.
"""

from __future__ import annotations

import enum
import hashlib
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, DomainError

Point = tuple[int, ...]

#: Largest number of ranks a grid may have.
MAX_RANKS = 2**31


class Ambient(str, enum.Enum):
    BOX = "box"
    TORUS = "torus"


@dataclass(frozen=True)
class Grid:
    """Geometry of the ambient space: ``[n]^d`` or ``Z_n^d``."""

    ambient: Ambient
    d: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "ambient", Ambient(self.ambient))
        if self.d < 1 or self.n < 1:
            raise DomainError(f"need d >= 1 and n >= 1, got d={self.d}, n={self.n}")
        if self.n**self.d > MAX_RANKS:
            raise CapacityError(f"n^d = {self.n}^{self.d} exceeds the rank cap 2^31")

    @property
    def size(self) -> int:
        return self.n**self.d

    @property
    def low(self) -> int:
        """Smallest legal coordinate."""
        return 1 if self.ambient is Ambient.BOX else 0

    @property
    def high(self) -> int:
        return self.n if self.ambient is Ambient.BOX else self.n - 1

    def check(self, p: Sequence[int]) -> Point:
        p = tuple(int(c) for c in p)
        if len(p) != self.d:
            raise DomainError(f"point {p} has {len(p)} coordinates, expected {self.d}")
        lo, hi = self.low, self.high
        for c in p:
            if not lo <= c <= hi:
                raise DomainError(f"coordinate {c} of {p} outside [{lo}, {hi}]")
        return p

    def rank(self, p: Sequence[int]) -> int:
        p = self.check(p)
        r = 0
        for c in p:
            r = r * self.n + (c - self.low)
        return r

    def unrank(self, rank: int) -> Point:
        if not 0 <= rank < self.size:
            raise DomainError(f"rank {rank} outside [0, {self.size})")
        coords = []
        for _ in range(self.d):
            rank, c = divmod(rank, self.n)
            coords.append(c + self.low)
        return tuple(reversed(coords))

    def points(self) -> Iterator[Point]:
        for r in range(self.size):
            yield self.unrank(r)

    def add(self, points: Iterable[Sequence[int]]) -> Point:
        """Coordinatewise sum; reduced modulo ``n`` on the torus."""
        total = [0] * self.d
        for p in points:
            p = self.check(p)
            for i, c in enumerate(p):
                total[i] += c
        if self.ambient is Ambient.TORUS:
            total = [c % self.n for c in total]
        return tuple(total)


@dataclass(frozen=True)
class EquationSpec:
    """The equation ``sum(group 1) = ... = sum(group k)`` over a grid.

    ``groups`` lists the group sizes; equal sizes give the symmetric
    equation with ``k`` groups of ``h`` summands.  ``r`` is the number of
    colors and is only needed by the coloring operations.
    """

    ambient: Ambient
    d: int
    n: int
    groups: tuple[int, ...]
    r: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "ambient", Ambient(self.ambient))
        object.__setattr__(self, "groups", tuple(int(g) for g in self.groups))
        if len(self.groups) < 2:
            raise DomainError(f"need at least two groups, got {self.groups}")
        if any(g < 1 for g in self.groups):
            raise DomainError(f"group sizes must be positive, got {self.groups}")
        if self.r is not None and self.r < 1:
            raise DomainError(f"r must be positive, got {self.r}")
        Grid(self.ambient, self.d, self.n)

    @classmethod
    def symmetric(cls, d: int, n: int, k: int, h: int, r: int | None = None,
                  ambient: Ambient | str = Ambient.BOX) -> "EquationSpec":
        return cls(Ambient(ambient), d, n, (h,) * k, r)

    @property
    def grid(self) -> Grid:
        return Grid(self.ambient, self.d, self.n)

    @property
    def k(self) -> int:
        return len(self.groups)

    @property
    def is_symmetric(self) -> bool:
        return len(set(self.groups)) == 1

    @property
    def h(self) -> int:
        if not self.is_symmetric:
            raise DomainError(f"groups {self.groups} are not all equal")
        return self.groups[0]

    @property
    def total(self) -> int:
        """Number of points in a solution (``kh`` in the symmetric case)."""
        return sum(self.groups)

    def with_(self, **changes) -> "EquationSpec":
        fields = dict(ambient=self.ambient, d=self.d, n=self.n, groups=self.groups, r=self.r)
        fields.update(changes)
        return EquationSpec(**fields)

    def require_colors(self) -> int:
        if self.r is None:
            raise DomainError("this operation needs a color count r")
        return self.r

    def require_symmetric(self) -> int:
        if not self.is_symmetric or self.groups[0] < 2:
            raise DomainError(f"need equal group sizes h >= 2, got {self.groups}")
        return self.groups[0]


def rank(p: Sequence[int], spec: EquationSpec | Grid) -> int:
    grid = spec.grid if isinstance(spec, EquationSpec) else spec
    return grid.rank(p)


def unrank(r: int, spec: EquationSpec | Grid) -> Point:
    grid = spec.grid if isinstance(spec, EquationSpec) else spec
    return grid.unrank(r)


def point_sum(points: Iterable[Sequence[int]], spec: EquationSpec | Grid) -> Point:
    grid = spec.grid if isinstance(spec, EquationSpec) else spec
    return grid.add(points)


@dataclass(frozen=True)
class PointSet:
    """A subset of a grid, stored as a bit-vector over ranks."""

    grid: Grid
    bits: int = field(default=0)

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.grid.size:
            raise DomainError("bit-vector has bits beyond the grid size")

    @classmethod
    def from_points(cls, grid: Grid, points: Iterable[Sequence[int]]) -> "PointSet":
        bits = 0
        for p in points:
            bits |= 1 << grid.rank(p)
        return cls(grid, bits)

    @classmethod
    def from_ranks(cls, grid: Grid, ranks: Iterable[int]) -> "PointSet":
        bits = 0
        for r in ranks:
            if not 0 <= r < grid.size:
                raise DomainError(f"rank {r} outside [0, {grid.size})")
            bits |= 1 << r
        return cls(grid, bits)

    @classmethod
    def interval(cls, grid: Grid, lo: int, hi: int) -> "PointSet":
        """All points with every coordinate in ``[lo, hi]``."""
        lo = max(lo, grid.low)
        hi = min(hi, grid.high)
        if lo > hi:
            return cls(grid, 0)
        side = range(lo, hi + 1)
        return cls.from_points(grid, _product([side] * grid.d))

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, p) -> bool:
        try:
            return bool(self.bits >> self.grid.rank(p) & 1)
        except DomainError:
            return False

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def _same_grid(self, other: "PointSet") -> None:
        if self.grid != other.grid:
            raise DomainError(f"point sets live in different grids: {self.grid} vs {other.grid}")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._same_grid(other)
        return PointSet(self.grid, self.bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._same_grid(other)
        return PointSet(self.grid, self.bits & other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._same_grid(other)
        return PointSet(self.grid, self.bits & ~other.bits)

    union = __or__
    intersection = __and__
    difference = __sub__

    def isdisjoint(self, other: "PointSet") -> bool:
        self._same_grid(other)
        return not self.bits & other.bits

    def add(self, p: Sequence[int]) -> "PointSet":
        return PointSet(self.grid, self.bits | 1 << self.grid.rank(p))

    def remove(self, p: Sequence[int]) -> "PointSet":
        return PointSet(self.grid, self.bits & ~(1 << self.grid.rank(p)))

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        out = []
        bits, base = self.bits, 0
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return tuple(out)

    @cached_property
    def points(self) -> tuple[Point, ...]:
        return tuple(self.grid.unrank(r) for r in self.ranks)

    @cached_property
    def index(self) -> dict[int, int]:
        """Map rank -> position in :attr:`ranks`."""
        return {r: i for i, r in enumerate(self.ranks)}

    def reflect(self) -> "PointSet":
        """Image under ``x -> n + 1 - x`` (box) or ``x -> -x`` (torus) in every coordinate."""
        g = self.grid
        if g.ambient is Ambient.BOX:
            return PointSet.from_points(g, (tuple(g.n + 1 - c for c in p) for p in self.points))
        return PointSet.from_points(g, (tuple((-c) % g.n for c in p) for p in self.points))

    def to_torus(self) -> "PointSet":
        """Reinterpret a box subset in ``Z_n^d`` via ``x -> x - 1``."""
        if self.grid.ambient is not Ambient.BOX:
            raise DomainError("to_torus expects a box point set")
        # Ranks coincide: both orders are lexicographic over the same offsets.
        return PointSet(Grid(Ambient.TORUS, self.grid.d, self.grid.n), self.bits)

    def to_box(self) -> "PointSet":
        if self.grid.ambient is not Ambient.TORUS:
            raise DomainError("to_box expects a torus point set")
        return PointSet(Grid(Ambient.BOX, self.grid.d, self.grid.n), self.bits)

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.grid.ambient.value}:{self.grid.d}:{self.grid.n}:".encode())
        h.update(self.bits.to_bytes((self.grid.size + 7) // 8 or 1, "little"))
        return h.hexdigest()

    # -- serialization -------------------------------------------------

    def to_lines(self) -> str:
        return "".join("(" + ",".join(map(str, p)) + ")\n" for p in self.points)

    @classmethod
    def from_lines(cls, grid: Grid, text: str) -> "PointSet":
        pts = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)", line)
            if not m:
                raise DomainError(f"cannot parse point line {line!r}")
            pts.append(tuple(int(c) for c in m.group(1).split(",")))
        return cls.from_points(grid, pts)

    def to_rle(self) -> str:
        """Header plus alternating run lengths, starting with a run of zeros."""
        runs = []
        cur, length = 0, 0
        for r in range(self.grid.size):
            b = self.bits >> r & 1
            if b == cur:
                length += 1
            else:
                runs.append(length)
                cur, length = b, 1
        runs.append(length)
        g = self.grid
        return f"{g.ambient.value} d={g.d} n={g.n} rle={','.join(map(str, runs))}"

    @classmethod
    def from_rle(cls, text: str) -> "PointSet":
        m = re.fullmatch(r"\s*(box|torus)\s+d=(\d+)\s+n=(\d+)\s+rle=([\d,]*)\s*", text)
        if not m:
            raise DomainError(f"cannot parse run-length form {text!r}")
        grid = Grid(Ambient(m.group(1)), int(m.group(2)), int(m.group(3)))
        runs = [int(x) for x in m.group(4).split(",") if x]
        if sum(runs) != grid.size:
            raise DomainError(f"runs cover {sum(runs)} ranks, grid has {grid.size}")
        bits, pos = 0, 0
        for i, length in enumerate(runs):
            if i % 2:
                bits |= ((1 << length) - 1) << pos
            pos += length
        return cls(grid, bits)

    def __repr__(self) -> str:
        g = self.grid
        if len(self) <= 12:
            body = ", ".join(_fmt(p) for p in self.points)
        else:
            body = f"{len(self)} points"
        return f"PointSet({g.ambient.value} d={g.d} n={g.n}: {{{body}}})"


def _fmt(p: Point) -> str:
    return str(p[0]) if len(p) == 1 else "(" + ",".join(map(str, p)) + ")"


def _product(sides):
    from itertools import product
    return product(*sides)


def full_grid(spec: EquationSpec | Grid) -> PointSet:
    grid = spec.grid if isinstance(spec, EquationSpec) else spec
    return PointSet(grid, (1 << grid.size) - 1)


def box_interval(n: int) -> PointSet:
    """``[n]`` as a one-dimensional box point set."""
    return full_grid(Grid(Ambient.BOX, 1, n))
