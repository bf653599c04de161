"""Templates: a palette (set of allowed colors) for every point.

Palettes are bitmasks with bit ``c - 1`` standing for color ``c``.  A
coloring is the special case where every palette is a singleton.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .coloring import DEFAULT_COLORING_BUDGET, closing_lists
from .errors import CapacityError, DomainError
from .exact import Interval, decide, log2_interval, power_interval
from .grid import EquationSpec, PointSet
from .parallel import pmap
from .solutions import Solution


def mask_of(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        if c < 1:
            raise DomainError(f"colors start at 1, got {c}")
        m |= 1 << (c - 1)
    return m


def colors_of(mask: int) -> tuple[int, ...]:
    out, c = [], 1
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return tuple(out)


@dataclass(frozen=True)
class Template:
    A: PointSet
    r: int
    palettes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "palettes", tuple(int(m) for m in self.palettes))
        if len(self.palettes) != len(self.A):
            raise DomainError(f"template has {len(self.palettes)} palettes, the set has {len(self.A)} points")
        for m in self.palettes:
            if m < 0 or m >> self.r:
                raise DomainError(f"palette {colors_of(m)} is not inside [1, {self.r}]")

    @classmethod
    def from_sets(cls, A: PointSet, r: int, sets: Sequence[Iterable[int]]) -> "Template":
        return cls(A, r, tuple(mask_of(s) for s in sets))

    @classmethod
    def full(cls, A: PointSet, r: int) -> "Template":
        return cls(A, r, ((1 << r) - 1,) * len(A))

    @classmethod
    def uniform(cls, A: PointSet, r: int, colors: Iterable[int]) -> "Template":
        return cls(A, r, (mask_of(colors),) * len(A))

    @classmethod
    def from_coloring(cls, A: PointSet, r: int, colors: Sequence[int]) -> "Template":
        return cls(A, r, tuple(1 << (c - 1) for c in colors))

    def palette(self, i: int) -> tuple[int, ...]:
        return colors_of(self.palettes[i])

    def sizes(self) -> list[int]:
        return [m.bit_count() for m in self.palettes]

    def to_lines(self) -> str:
        return "".join(f"{rk}: {{{','.join(map(str, colors_of(m)))}}}\n"
                       for rk, m in zip(self.A.ranks, self.palettes))

    @classmethod
    def from_lines(cls, A: PointSet, r: int, text: str) -> "Template":
        found: dict[int, int] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"(\d+)\s*:\s*\{([\d,\s]*)\}", line)
            if not m:
                raise DomainError(f"cannot parse template line {line!r}")
            cols = [int(c) for c in m.group(2).replace(" ", "").split(",") if c]
            found[int(m.group(1))] = mask_of(cols)
        missing = set(A.ranks) - set(found)
        extra = set(found) - set(A.ranks)
        if missing or extra:
            raise DomainError(f"template ranks do not match the set (missing {sorted(missing)[:5]}, "
                              f"extra {sorted(extra)[:5]})")
        return cls(A, r, tuple(found[rk] for rk in A.ranks))


def _same_base(P1: Template, P2: Template) -> None:
    if P1.A != P2.A:
        raise DomainError("templates live on different point sets")


def is_subtemplate(P1: Template, P2: Template) -> bool:
    _same_base(P1, P2)
    return all(a & ~b == 0 for a, b in zip(P1.palettes, P2.palettes))


def injective_assignments(palettes: Sequence[int]) -> int:
    """Ways to choose pairwise distinct colors, one from each palette."""
    order = sorted(palettes, key=lambda m: m.bit_count())
    n = len(order)

    def rec(i, used):
        if i == n:
            return 1
        total = 0
        free = order[i] & ~used
        while free:
            low = free & -free
            total += rec(i + 1, used | low)
            free ^= low
        return total

    if any(m == 0 for m in order):
        return 0
    return rec(0, 0)


def _rainbow_chunk(task):
    palettes, sets = task
    return sum(injective_assignments([palettes[i] for i in s]) for s in sets)


def count_rainbow_subtemplates(P: Template, solutions: Sequence[Solution], *, workers: int = 1) -> int:
    """Subtemplates of ``P`` that are rainbow solutions.

    Such a subtemplate is one solution set with a singleton palette at each
    of its points, pairwise distinct, and empty palettes elsewhere; so the
    count is a sum of injective-assignment counts over solution sets.
    """
    pos = P.A.index
    sets = [tuple(pos[p] for p in s.points) for s in solutions]
    if workers <= 1:
        return _rainbow_chunk((P.palettes, sets))
    size = max(1, -(-len(sets) // (4 * workers)))
    chunks = [(P.palettes, sets[i:i + size]) for i in range(0, len(sets), size)]
    return sum(pmap(_rainbow_chunk, chunks, workers))


def count_template_colorings(P: Template, solutions: Sequence[Solution], *,
                             budget: int = DEFAULT_COLORING_BUDGET) -> int:
    """Rainbow-free colorings that pick every point's color from its palette."""
    if any(m == 0 for m in P.palettes):
        return 0
    closing = closing_lists(solutions, P.A)
    n = len(closing)
    last = max((i for i in range(n) if closing[i]), default=-1)
    tail = [1] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail[i] = tail[i + 1] * P.palettes[i].bit_count()
    choices = [colors_of(m) for m in P.palettes]
    colors = [0] * n
    nodes = 0

    def rec(i):
        nonlocal nodes
        if i > last:
            return tail[i]
        nodes += 1
        if nodes > budget:
            raise CapacityError(f"template coloring search exceeded the node budget {budget}")
        total = 0
        for c in choices[i]:
            colors[i] = c
            if any(len({colors[j] for j in s}) == len(s) for s in closing[i]):
                continue
            total += rec(i + 1)
        return total

    return rec(0)


def log_power(n: int, e: int, bits: int) -> Interval:
    """``(log2 n) ** e`` as a certified interval."""
    return log2_interval(n, bits) ** e


@dataclass
class Threshold:
    """A value compared with a bound involving ``log2 n``."""

    value: int | Fraction
    bound: Interval
    holds: bool | None

    def to_json(self) -> dict:
        v = self.value
        return {"value": str(v) if isinstance(v, Fraction) else v,
                "bound": self.bound.to_json(), "holds": self.holds}


def _le_threshold(value, make_bound) -> Threshold:
    """``value <= bound`` decided with certified intervals."""
    holds = decide(lambda bits: Interval.exact(value).le(make_bound(bits)))
    return Threshold(value, make_bound(256), holds)


@dataclass
class TemplateClassification:
    x_sizes: dict[int, int]
    x_low: int
    x_high: int
    good: Threshold
    dominant: tuple[int, ...]
    dominant_size: int
    dominant_check: Threshold
    high_check: Threshold

    @property
    def verdict(self) -> str:
        return "good" if self.good.holds else "bad"

    def to_json(self) -> dict:
        return {"x_sizes": {str(i): c for i, c in sorted(self.x_sizes.items())},
                "x_low": self.x_low, "x_high": self.x_high, "verdict": self.verdict,
                "low_check": self.good.to_json(),
                "dominant": list(self.dominant), "dominant_size": self.dominant_size,
                "dominant_check": self.dominant_check.to_json(),
                "high_check": self.high_check.to_json()}


def dominant_palette(P: Template, size: int) -> tuple[tuple[int, ...], int]:
    """Color set of the given size that equals the most palettes.

    Ties go to the lexicographically smallest sorted color tuple; with no
    palette of that size the answer is ``(1, ..., size)`` with count 0.
    """
    counts = Counter(m for m in P.palettes if m.bit_count() == size)
    best, best_count = tuple(range(1, size + 1)), 0
    for m, c in counts.items():
        cols = colors_of(m)
        if c > best_count or (c == best_count and cols < best):
            best, best_count = cols, c
    return best, best_count


def dominant_palette_scan(P: Template, size: int) -> tuple[tuple[int, ...], int]:
    """Same answer as :func:`dominant_palette` by trying every color set."""
    counts = Counter(P.palettes)
    best, best_count = None, -1
    for cols in combinations(range(1, P.r + 1), size):
        c = counts.get(mask_of(cols), 0)
        if c > best_count:
            best, best_count = cols, c
    return best, best_count


def classify_template(P: Template, spec: EquationSpec) -> TemplateClassification:
    """Palette-size partition, good/bad verdict and dominant palette."""
    n, size, m = spec.n, len(P.A), spec.total - 1
    if n < 2:
        raise DomainError("classification needs n >= 2 so that log2 n > 0")
    if P.r < m:
        raise DomainError(f"need r >= {m} colors, got r={P.r}")
    x_sizes = Counter(P.sizes())
    x_sizes = {i: x_sizes.get(i, 0) for i in range(P.r + 1)}
    x_low = sum(c for i, c in x_sizes.items() if i <= m - 1)
    x_high = sum(c for i, c in x_sizes.items() if i >= m + 1)
    dom, dom_size = dominant_palette(P, m)
    good = _le_threshold(x_low, lambda b: size / log_power(n, 3, b))
    # |A_{P,C}| >= |A| - |A|/log^2  <=>  |A| - |A_{P,C}| <= |A|/log^2
    dom_check = _le_threshold(size - dom_size, lambda b: size / log_power(n, 2, b))
    high = _le_threshold(x_high, lambda b: size / log_power(n, 4, b))
    return TemplateClassification(x_sizes, x_low, x_high, good, dom, dom_size, dom_check, high)


def palette_product_bound(P: Template) -> int:
    """Trivial bound: every coloring inside ``P`` is counted by the product of palette sizes."""
    return math.prod(P.sizes())


def bad_template_bound(P: Template, spec: EquationSpec) -> int:
    """``(kh-2)^{x_low} (kh-1)^{|X_{kh-1}|} r^{x_high}``, an upper bound on g(P, A)."""
    m = spec.total - 1
    sizes = P.sizes()
    low = sum(1 for s in sizes if s <= m - 1)
    mid = sum(1 for s in sizes if s == m)
    high = sum(1 for s in sizes if s >= m + 1)
    if any(s == 0 for s in sizes):
        return 0
    return (m - 1) ** low * m**mid * P.r**high


@dataclass
class ContainerReport:
    covered: list[bool]
    skipped: list[int]
    rainbow_counts: list[int]
    rainbow_threshold: Interval
    rainbow_ok: list[bool | None]
    size: int
    size_exponent: Interval
    size_ok: bool | None

    @property
    def coverage_ok(self) -> bool:
        return all(self.covered[i] for i in range(len(self.covered)) if i not in self.skipped)

    def to_json(self) -> dict:
        return {"coverage": {"ok": self.coverage_ok, "covered": self.covered,
                             "skipped_not_rainbow_free": self.skipped},
                "rainbow_bound": {"threshold": self.rainbow_threshold.to_json(),
                                  "counts": self.rainbow_counts, "ok": self.rainbow_ok,
                                  "all_ok": all(x is True for x in self.rainbow_ok)},
                "collection_size": {"size": self.size, "log2_bound": self.size_exponent.to_json(),
                                    "ok": self.size_ok}}


def _rainbow_threshold(spec: EquationSpec, size: int, bits: int) -> Interval:
    k, h = spec.k, spec.h
    return Interval.exact(size ** (k * (h - 1) + 1)) / log_power(spec.n, 5 * k * h, bits)


def _size_exponent(spec: EquationSpec, size: int, bits: int) -> Interval:
    k, h, d = spec.k, spec.h, spec.d
    scale = power_interval(spec.n, Fraction(-k * (h - 1) * d, k * h - 1), bits)
    return size * scale * log_power(spec.n, 10, bits)


def container_conclusions_check(containers: Sequence[Template], to_cover: Sequence[Template],
                                spec: EquationSpec, solutions: Sequence[Solution]) -> ContainerReport:
    """Check a supplied container collection against the three container conclusions.

    Templates in ``to_cover`` that contain a rainbow solution are not
    required to be covered and are listed as skipped.
    """
    spec.require_symmetric()
    if spec.n < 2:
        raise DomainError("container thresholds need n >= 2")
    bases = {P.A for P in [*containers, *to_cover]}
    if len(bases) > 1:
        raise DomainError("templates live on different point sets")
    size = len(bases.pop()) if bases else 0
    covered, skipped = [], []
    for i, T in enumerate(to_cover):
        if count_rainbow_subtemplates(T, solutions):
            skipped.append(i)
        covered.append(any(is_subtemplate(T, C) for C in containers))
    counts = [count_rainbow_subtemplates(C, solutions) for C in containers]
    ok = [decide(lambda b, c=c: Interval.exact(c).le(_rainbow_threshold(spec, size, b)))
          for c in counts]
    n_c = len(containers)
    if n_c <= 1:
        size_ok = True  # log2 |C| <= 0 and the exponent is positive
    else:
        size_ok = decide(lambda b: log2_interval(n_c, b).le(_size_exponent(spec, size, b)))
    return ContainerReport(covered, skipped, counts, _rainbow_threshold(spec, size, 256), ok,
                           n_c, _size_exponent(spec, size, 256), size_ok)
