"""The rainbow hypergraph on ``A x [r]`` and its co-degree statistics.

Vertices are (point, color) pairs.  Edges are rainbow-colored solution
sets: ``kh`` distinct points forming a solution set, with ``kh`` distinct
colors.  Edges are never stored; a vertex set whose points are distinct is
contained in ``N(B) * (r-j)(r-j-1)...(r-kh+1)`` edges, where ``N(B)`` is the
number of solution sets containing its point set ``B``.  So co-degrees
reduce to tallies of point subsets of solution sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityError, DomainError
from .exact import Interval, decide, falling, log2_interval, power_interval, render_fraction, to_decimal
from .grid import EquationSpec, PointSet
from .solutions import Solution, count_solutions

#: Largest number of (solution, subset) pairs tallied in one pass.
TALLY_CAP = 5 * 10**7


@dataclass
class RainbowHypergraph:
    A: PointSet
    spec: EquationSpec
    solutions: list[Solution]
    _tallies: dict = field(default_factory=dict, repr=False)

    @property
    def r(self) -> int:
        return self.spec.require_colors()

    @property
    def uniformity(self) -> int:
        return self.spec.total

    @property
    def vertex_count(self) -> int:
        return len(self.A) * self.r

    @property
    def edge_count(self) -> int:
        return falling(self.r, self.uniformity) * len(self.solutions)

    @property
    def avg_degree(self) -> Fraction:
        if self.vertex_count == 0:
            return Fraction(0)
        return Fraction(self.uniformity * self.edge_count, self.vertex_count)

    def edges(self) -> Iterator[frozenset]:
        """Explicit edges as frozensets of (rank, color); tiny instances only."""
        for sol in self.solutions:
            for cols in permutations(range(1, self.r + 1), len(sol.points)):
                yield frozenset(zip(sol.points, cols))

    def point_codegree(self, j: int) -> int:
        """Largest number of solution sets containing a fixed ``j``-point set."""
        if j not in self._tallies:
            self._tallies[j] = _max_subset_tally(self.solutions, j, self.A.grid.size)
        return self._tallies[j]

    def max_codegree(self, j: int) -> int:
        u = self.uniformity
        if not 2 <= j <= u:
            raise DomainError(f"need 2 <= j <= {u}, got j={j}")
        return self.point_codegree(j) * falling(self.r - j, u - j)

    def codegrees(self) -> dict[int, int]:
        return {j: self.max_codegree(j) for j in range(2, self.uniformity + 1)}


def _max_subset_tally(solutions: Sequence[Solution], j: int, base: int) -> int:
    """Max over ``j``-sets of how many solution sets contain them."""
    if not solutions:
        return 0
    pts = np.array([s.points for s in solutions], dtype=np.int64)
    u = pts.shape[1]
    if j > u:
        return 0
    combos = np.array(list(combinations(range(u), j)), dtype=np.int64)
    if len(solutions) * len(combos) > TALLY_CAP:
        raise CapacityError(f"co-degree tally needs {len(solutions) * len(combos)} entries, "
                            f"cap is {TALLY_CAP}")
    if base**j < 2**63:
        weights = base ** np.arange(j - 1, -1, -1, dtype=np.int64)
        codes = np.concatenate([pts[:, c] @ weights for c in combos])
        _, counts = np.unique(codes, return_counts=True)
        return int(counts.max())
    from collections import Counter
    tally = Counter(tuple(row[list(c)]) for row in pts.tolist() for c in combos)
    return max(tally.values())


def build_hypergraph(A: PointSet, spec: EquationSpec, *, solutions=None, workers: int = 1) -> RainbowHypergraph:
    r = spec.require_colors()
    if r < spec.total:
        raise DomainError(f"the rainbow hypergraph needs r >= {spec.total}, got r={r}")
    if solutions is None:
        solutions = count_solutions(A, spec, workers=workers).solutions
    return RainbowHypergraph(A, spec, list(solutions))


def codegree_terms(H: RainbowHypergraph, tau):
    """The summands ``2^{C(u,2)-1-C(j-1,2)} Delta_j / (d tau^{j-1})`` for j = 2..u."""
    if H.edge_count == 0:
        raise DomainError("the hypergraph has no edges, so its average degree is zero")
    u = H.uniformity
    d = H.avg_degree
    out = {}
    for j in range(2, u + 1):
        coef = Fraction(2) ** (math.comb(u, 2) - 1 - math.comb(j - 1, 2))
        out[j] = coef * H.max_codegree(j) / (d * tau ** (j - 1))
    return out


def codegree_function(H: RainbowHypergraph, tau):
    """Exact value for rational ``tau``; a certified interval for an interval ``tau``."""
    if isinstance(tau, Interval):
        if not (tau.lo > 0):
            raise DomainError("tau must be positive")
    else:
        tau = Fraction(tau)
        if not 0 < tau < 1:
            raise DomainError(f"tau must lie in (0, 1), got {tau}")
    return sum(codegree_terms(H, tau).values(), Fraction(0) if not isinstance(tau, Interval)
               else Interval.exact(0))


def codegree_function_nested(H: RainbowHypergraph, tau: Fraction) -> Fraction:
    """Second evaluation path: Horner form in ``1/tau``, integer arithmetic until the end."""
    u = H.uniformity
    tau = Fraction(tau)
    inv = 1 / tau
    acc = Fraction(0)
    for j in range(u, 1, -1):
        acc = acc * inv + Fraction(H.max_codegree(j), 2 ** math.comb(j - 1, 2))
    acc *= inv
    return acc * 2 ** (math.comb(u, 2) - 1) * H.vertex_count / (u * H.edge_count)


def epsilon_interval(spec: EquationSpec, bits: int = 256) -> Interval:
    u, r = spec.total, spec.require_colors()
    return Interval.exact(Fraction(1, falling(r, u))) / log2_interval(spec.n, bits) ** (5 * u)


def tau_interval(spec: EquationSpec, bits: int = 256) -> Interval:
    k, h, d = spec.k, spec.h, spec.d
    return power_interval(spec.n, Fraction(-k * (h - 1) * d, k * h - 1), bits) * \
        log2_interval(spec.n, bits) ** 8


@dataclass
class ParameterReport:
    epsilon: Interval
    tau: Interval
    tau_cap: Fraction
    tau_ok: bool | None
    range_ok: bool | None
    codegree: Interval | None = None
    codegree_cap: Interval | None = None
    codegree_ok: bool | None = None
    trend_target: Interval | None = None

    @property
    def hypothesis_ok(self) -> bool:
        return bool(self.tau_ok and self.range_ok and self.codegree_ok)

    def to_json(self) -> dict:
        out = {"epsilon": self.epsilon.to_json(), "tau": self.tau.to_json(),
               "tau_cap": render_fraction(self.tau_cap), "tau_ok": self.tau_ok,
               "epsilon_tau_below_half": self.range_ok}
        if self.codegree is not None:
            out.update({"codegree_function": self.codegree.to_json(),
                        "codegree_cap": self.codegree_cap.to_json(),
                        "codegree_ok": self.codegree_ok,
                        "log_power_target": self.trend_target.to_json()})
        out["hypothesis_ok"] = self.hypothesis_ok
        return out


def container_parameters(spec: EquationSpec, H: RainbowHypergraph | None = None) -> ParameterReport:
    """Container parameters and the hypothesis check for the rainbow hypergraph.

    ``epsilon = (r-kh)!/r! * (log2 n)^{-5kh}`` and
    ``tau = n^{-k(h-1)d/(kh-1)} (log2 n)^8``; the hypothesis asks for
    ``tau < 1/(200 kh (kh)!^2)``, ``epsilon, tau < 1/2`` and
    ``Delta(H, tau) <= epsilon / (12 (kh)!)``.
    """
    spec.require_symmetric()
    if spec.n < 2:
        raise DomainError("the parameters need n >= 2")
    u = spec.total
    cap = Fraction(1, 200 * u * math.factorial(u) ** 2)
    tau_ok = decide(lambda b: tau_interval(spec, b).lt(cap))
    range_ok = decide(lambda b: _both(epsilon_interval(spec, b).lt(Fraction(1, 2)),
                                      tau_interval(spec, b).lt(Fraction(1, 2))))
    rep = ParameterReport(epsilon_interval(spec), tau_interval(spec), cap, tau_ok, range_ok)
    if H is not None and H.edge_count > 0:
        def value(b):
            return codegree_function(H, tau_interval(spec, b))

        def bound(b):
            return epsilon_interval(spec, b) / (12 * math.factorial(u))

        rep.codegree = value(256)
        rep.codegree_cap = bound(256)
        rep.codegree_ok = decide(lambda b: value(b).le(bound(b)))
        rep.trend_target = 1 / log2_interval(spec.n, 256) ** (5 * u)
    return rep


def _both(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def deltaj_bound(j: int, k: int, h: int, r: int, size: int) -> Fraction:
    """Case-by-case upper bound on the ``j``-th maximum co-degree (exact, summed form).

    Exponents of ``|A|`` can be negative for large ``j``, so the bound is a
    rational.  An empty set has no edges and gets bound 0.
    """
    u = k * h
    if not 2 <= j <= u:
        raise DomainError(f"need 2 <= j <= {u}, got j={j}")
    if j == u:
        return Fraction(1)
    if size == 0:
        return Fraction(0)
    a = Fraction(size)
    if j <= h - 1:
        return r ** (u - j) * a ** (u - j - (k - 1))
    return r ** (u - j) * (a ** (u - j - (k - 1))
                           + sum(a ** (u - j - (k - t)) for t in range(1, j // h + 1)))


def deltaj_bound_asymptotic(j: int, k: int, h: int, r: int, size: int) -> Fraction:
    """The simplified factor-2 form, meant for large sets."""
    u = k * h
    if j == u:
        return Fraction(1)
    if size == 0:
        return Fraction(0)
    a = Fraction(size)
    if j <= h - 1:
        return r ** (u - j) * a ** (u - j - (k - 1))
    return 2 * r ** (u - j) * a ** (u - j - (k - j // h))


@dataclass
class DeltaCheck:
    j: int
    exact: int
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.exact <= self.bound

    def to_json(self) -> dict:
        return {"j": self.j, "exact": self.exact, "bound": render_fraction(self.bound),
                "holds": self.holds}


def deltaj_bound_check(H: RainbowHypergraph, j: int) -> DeltaCheck:
    k, h = H.spec.k, H.spec.require_symmetric()
    return DeltaCheck(j, H.max_codegree(j), deltaj_bound(j, k, h, H.r, len(H.A)))


def codegree_by_fixing(H: RainbowHypergraph, j: int) -> int:
    """Second path for ``Delta_j``: fix each ``j``-point set and count solutions through it."""
    sets = [frozenset(s.points) for s in H.solutions]
    best = 0
    for B in combinations(H.A.ranks, j):
        c = sum(1 for X in sets if X.issuperset(B))
        best = max(best, c)
    return best * falling(H.r - j, H.uniformity - j)


@dataclass
class HypergraphStats:
    vertices: int
    edges: int
    avg_degree: Fraction
    delta: dict[int, int]
    bounds: list[DeltaCheck]
    parameters: ParameterReport

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "edges": self.edges,
                "avg_degree": {"exact": render_fraction(self.avg_degree),
                               "approx": to_decimal(self.avg_degree)},
                "delta": {str(j): v for j, v in self.delta.items()},
                "delta_bounds": [b.to_json() for b in self.bounds],
                "parameters": self.parameters.to_json()}


def hypergraph_stats(H: RainbowHypergraph) -> HypergraphStats:
    delta = H.codegrees()
    bounds = [deltaj_bound_check(H, j) for j in delta]
    return HypergraphStats(H.vertex_count, H.edge_count, H.avg_degree, delta, bounds,
                           container_parameters(H.spec, H))
