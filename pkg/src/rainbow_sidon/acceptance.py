"""The acceptance suite: twelve exact checks with one verdict line each.

Every criterion returns a :class:`CriterionResult` whose JSON form holds no
timings or worker counts, so runs at different worker counts can be
compared byte for byte (criterion 12).  Failures are reported with
witnesses rather than raised.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable

from . import oracle
from .coloring import count_rainbow_free, is_rainbow_free, lower_bound_value
from .constructions import (build_corner_sets, check_solution_free, forcing_property_check,
                            odd_coordinate_set, solution_free_ratio_set)
from .errors import ConstructionError
from .exact import binom_convex, render_fraction
from .extremal import extremal_scan, full_grid_trend
from .grid import Ambient, EquationSpec, Grid, PointSet, full_grid
from .hypergraph import build_hypergraph, codegree_by_fixing, deltaj_bound
from .parallel import pmap
from .report import dumps
from .solutions import count_solutions, count_through_point, repeated_tuple_bound, split_count
from .templates import Template, count_rainbow_subtemplates, count_template_colorings

#: Seed shared by every sampled case.
SEED = 20240601

#: Failures kept verbatim in a result; the total is always reported.
MAX_WITNESSES = 25

#: Largest set whose coloring count the sweep computes (seconds at most).
SWEEP_COLORING_MAX_SIZE = 10


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict
    failures: list = field(default_factory=list)
    failure_count: int = 0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" ({self.failure_count} failures)" if self.failure_count else ""
        return f"criterion {self.number:2d} [{self.title}]: {verdict}{extra}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "details": self.details, "failure_count": self.failure_count,
                "failures": self.failures[:MAX_WITNESSES]}


def _result(number, title, details, failures) -> CriterionResult:
    return CriterionResult(number, title, not failures, details, failures[:MAX_WITNESSES],
                           len(failures))


def _rng(*key) -> random.Random:
    return random.Random("-".join(map(str, (SEED,) + key)))


def _random_subset(grid: Grid, rng: random.Random, p: float = 0.5) -> PointSet:
    return PointSet.from_ranks(grid, [i for i in range(grid.size) if rng.random() < p])


# -- 1 -----------------------------------------------------------------------

def _solutions_case(task):
    A, spec = task
    fast = count_solutions(A, spec).count
    slow = len(oracle.solution_sets(A, spec))
    return fast, slow


def criterion_1(workers: int = 1) -> CriterionResult:
    """Bucket-engine solution counts equal the all-subsets oracle."""
    cases = []
    s1 = EquationSpec.symmetric(1, 10, 2, 2)
    cases += [(PointSet(s1.grid, bits), s1) for bits in range(1 << 10)]
    sampled = 0
    for d, n in ((2, 4), (3, 3)):
        s = EquationSpec.symmetric(d, n, 2, 2)
        rng = _rng(1, d, n)
        for _ in range(50):
            cases.append((_random_subset(s.grid, rng, rng.choice((0.3, 0.5, 0.7))), s))
            sampled += 1
    failures = []
    for (A, s), (fast, slow) in zip(cases, pmap(_solutions_case, cases, workers)):
        if fast != slow:
            failures.append({"set": A.to_rle(), "engine": fast, "oracle": slow})
    return _result(1, "solution counts match the oracle",
                   {"line_subsets": 1024, "sampled_subsets": sampled}, failures)


# -- 2 -----------------------------------------------------------------------

def _coloring_case(task):
    A, spec = task
    census = count_rainbow_free(A, spec)
    g, hist = oracle.colorings(A, spec)
    return census.g, census.by_palette_size, g, hist


def criterion_2(workers: int = 1) -> CriterionResult:
    """Backtracking coloring counts equal full enumeration."""
    cases = []
    for r in range(1, 5):
        s = EquationSpec.symmetric(1, 5, 2, 2, r)
        cases += [(PointSet(s.grid, bits), s) for bits in range(1 << 5)]
    s2 = EquationSpec.symmetric(2, 4, 2, 2, 4)
    rng = _rng(2)
    for _ in range(30):
        size = rng.randint(4, 8)
        cases.append((PointSet.from_ranks(s2.grid, rng.sample(range(16), size)), s2))
    failures = []
    for (A, s), (g, hist, g0, hist0) in zip(cases, pmap(_coloring_case, cases, workers)):
        if g != g0 or hist != hist0:
            failures.append({"set": A.to_rle(), "r": s.r, "engine": g, "oracle": g0})
    return _result(2, "coloring counts match enumeration",
                   {"line_cases": 128, "grid_cases": 30}, failures)


# -- 3 and 9 sweep -------------------------------------------------------------

def sweep_cases() -> list[tuple[EquationSpec, PointSet]]:
    """Full grids plus two seeded random subsets for each parameter tuple."""
    out = []
    for d, n_max in ((1, 20), (2, 5)):
        for k, h, n in product((2, 3), (2, 3), range(1, n_max + 1)):
            s = EquationSpec.symmetric(d, n, k, h)
            rng = _rng(3, d, k, h, n)
            out.append((s, full_grid(s)))
            for p in (0.5, 0.8):
                out.append((s, _random_subset(s.grid, rng, p)))
    return out


def _inequality_case(task):
    s, A = task
    k, h, d, n = s.k, s.h, s.d, s.n
    size = len(A)
    c = count_solutions(A, s)
    fails = []
    tag = {"d": d, "n": n, "k": k, "h": h, "set_size": size}
    if c.count > size ** (k * (h - 1) + 1):
        fails.append({**tag, "check": "solution count bound", "f": c.count})
    bound2 = repeated_tuple_bound(size, k, h)
    if c.repeated_tuples > bound2:
        fails.append({**tag, "check": "repeated tuple bound", "value": c.repeated_tuples,
                      "bound": bound2})
    if c.count * split_count(k, h) < (c.equal_sum_families - c.repeated_tuples) * math.factorial(k):
        fails.append({**tag, "check": "family lower bound", "f": c.count})
    cells = (h * n) ** d
    jensen = cells * binom_convex(Fraction(math.comb(size, h), cells), k)
    if c.equal_sum_families < jensen:
        fails.append({**tag, "check": "convexity bound", "value": c.equal_sum_families,
                      "bound": render_fraction(jensen)})
    g_checked = 0
    r = k * h
    if size <= SWEEP_COLORING_MAX_SIZE:
        g = count_rainbow_free(A, s.with_(r=r), solutions=c.solutions).g
        g_checked = 1
        if lower_bound_value(size, k, h, r) > g:
            fails.append({**tag, "check": "coloring lower bound", "g": g})
    return fails, g_checked


def criterion_3(workers: int = 1) -> CriterionResult:
    """Exact counting inequalities over the parameter sweep."""
    cases = sweep_cases()
    failures, g_checked = [], 0
    for fails, checked in pmap(_inequality_case, cases, workers):
        failures += fails
        g_checked += checked
    return _result(3, "exact counting inequalities",
                   {"instances": len(cases), "coloring_lower_bound_checked": g_checked}, failures)


# -- 4 -----------------------------------------------------------------------

def criterion_4(workers: int = 1) -> CriterionResult:
    """Colorings with at most kh - 1 colors are rainbow-free."""
    s = EquationSpec.symmetric(1, 5, 2, 2, 4)
    A = full_grid(s)
    sols = count_solutions(A, s).solutions
    checked, failures = 0, []
    for colors in product(range(1, 5), repeat=len(A)):
        if len(set(colors)) <= s.total - 1:
            checked += 1
            if not is_rainbow_free(colors, sols, A):
                failures.append({"coloring": list(colors)})
    return _result(4, "few colors are never rainbow", {"colorings_checked": checked}, failures)


# -- 5 -----------------------------------------------------------------------

def _greedy_sidon(size: int) -> list[int]:
    out: list[int] = []
    sums: set[int] = set()
    x = 0
    while len(out) < size:
        x += 1
        new = {x + y for y in out} | {2 * x}
        if sums.isdisjoint(new):
            out.append(x)
            sums |= new
    return out


def criterion_5(workers: int = 1) -> CriterionResult:
    """The closed-form lower bound equals the census of exactly kh - 1 colors."""
    failures, cases = [], 0
    sidon = _greedy_sidon(8)
    sets = []
    for size in range(0, 9):
        n = max(sidon[:size], default=1)
        s = EquationSpec.symmetric(1, n, 2, 2, 4)
        sets.append((s, PointSet.from_points(s.grid, [(x,) for x in sidon[:size]])))
    s6 = EquationSpec.symmetric(1, 6, 2, 2, 4)
    sets += [(s6, PointSet(s6.grid, bits)) for bits in range(1 << 6)]
    for s, A in sets:
        c = count_solutions(A, s)
        if c.count:
            continue
        cases += 1
        census = count_rainbow_free(A, s, solutions=c.solutions)
        census_value = census.by_palette_size.get(3, 0)
        formula = lower_bound_value(len(A), 2, 2, 4)
        direct = oracle.colorings(A, s, [])[1].get(3, 0) if len(A) <= 6 else census_value
        if not formula == census_value == direct:
            failures.append({"set": A.to_rle(), "formula": formula, "census": census_value,
                             "enumerated": direct})
    return _result(5, "inclusion-exclusion identity", {"solution_free_sets": cases}, failures)


# -- 6 -----------------------------------------------------------------------

def criterion_6(workers: int = 1) -> CriterionResult:
    """Torus counts never exceed box counts."""
    box = EquationSpec.symmetric(1, 5, 2, 2, 4)
    torus = box.with_(ambient=Ambient.TORUS)
    failures, rows = [], 0
    for bits in range(1 << 5):
        A = PointSet(box.grid, bits)
        gb = count_rainbow_free(A, box).g
        gt = count_rainbow_free(A.to_torus(), torus).g
        rows += 1
        if gt > gb:
            failures.append({"set": A.to_rle(), "box": gb, "torus": gt})
    return _result(6, "torus count at most box count", {"subsets": rows}, failures)


# -- 7 -----------------------------------------------------------------------

CRITERION_7_PAIRS = ((1, 2), (2, 3), (1, 4), (3, 4))
CRITERION_7_LARGE = (16, 24, 32, 48, 60)


def _mixed_case(task):
    d, groups, n, kind = task
    s = EquationSpec(Ambient.BOX, d, n, groups)
    try:
        S = solution_free_ratio_set(s) if kind == "ratio" else odd_coordinate_set(s)
    except ConstructionError:
        return None
    method = "enumerate" if n <= 12 else "auto"
    chk = check_solution_free(S, s, method)
    return {"d": d, "groups": list(groups), "n": n, "set": kind, "size": len(S),
            "method": chk.method, "solutions": chk.solutions}


def criterion_7(workers: int = 1) -> CriterionResult:
    """Both mixed-equation constructions are solution-free."""
    tasks = []
    for d, groups in product((1, 2), CRITERION_7_PAIRS):
        for n in list(range(1, 13)) + list(CRITERION_7_LARGE):
            tasks.append((d, groups, n, "ratio"))
            tasks.append((d, groups, n, "odd"))
    rows = [r for r in pmap(_mixed_case, tasks, workers) if r is not None]
    failures = [r for r in rows if r["solutions"] != 0]
    methods = sorted({r["method"] for r in rows})
    return _result(7, "mixed-equation constructions are solution-free",
                   {"instances": len(rows), "methods": methods,
                    "skipped_empty": len(tasks) - len(rows)}, failures)


# -- 8 -----------------------------------------------------------------------

def _corner_case(task):
    d, k, h, v = task
    s = EquationSpec.symmetric(d, 200, k, h)
    cc = build_corner_sets(v, s)
    rep = forcing_property_check(cc, 1000, SEED)
    return cc.pairwise_disjoint(), rep.passes, [len(S) for S in cc.all_sets()]


def criterion_8(workers: int = 1) -> CriterionResult:
    """Corner windows: disjointness, forcing, and the through-point lower bound."""
    failures = []
    tasks = [(d, k, h, v) for d, k, h in product((1, 2), (2, 3), (2, 3))
             for v in product((1, 200), repeat=d)]
    for (d, k, h, v), (disjoint, passes, sizes) in zip(tasks, pmap(_corner_case, tasks, workers)):
        if not disjoint or passes != 1000:
            failures.append({"d": d, "k": k, "h": h, "v": list(v), "disjoint": disjoint,
                             "passes": passes})
    bounds = 0
    skipped = 0
    for k, h, n in product((2, 3), (2, 3), range(2, 41)):
        s = EquationSpec.symmetric(1, n, k, h)
        for v in ((1,), (n,)):
            try:
                cc = build_corner_sets(v, s)
            except ConstructionError:
                skipped += 1
                continue
            exact = count_through_point(full_grid(s), v, s).count
            bounds += 1
            if exact < cc.lower_bound():
                failures.append({"k": k, "h": h, "n": n, "v": list(v), "through_point": exact,
                                 "bound": cc.lower_bound()})
    return _result(8, "corner construction",
                   {"constructions": len(tasks), "samples_each": 1000,
                    "lower_bound_checks": bounds, "too_thin_skipped": skipped}, failures)


# -- 9 -----------------------------------------------------------------------

def _codegree_case(task):
    s, A = task
    k, h = s.k, s.h
    sols = count_solutions(A, s).solutions
    fails, kh_checks = [], 0
    for r in (k * h, k * h + 1):
        H = build_hypergraph(A, s.with_(r=r), solutions=sols)
        if H.edge_count > 0:
            kh_checks += 1
            if H.max_codegree(k * h) != 1:
                fails.append({"d": s.d, "n": s.n, "k": k, "h": h, "r": r,
                              "check": "top co-degree", "value": H.max_codegree(k * h)})
        for j in range(2, k * h + 1):
            exact = H.max_codegree(j)
            bound = deltaj_bound(j, k, h, r, len(A))
            if exact > bound:
                fails.append({"d": s.d, "n": s.n, "k": k, "h": h, "r": r, "set_size": len(A),
                              "check": "co-degree bound", "j": j, "exact": exact,
                              "bound": render_fraction(bound)})
    return fails, kh_checks


def criterion_9(workers: int = 1) -> CriterionResult:
    """Hypergraph edge counts, co-degree paths and the pre-asymptotic co-degree bounds."""
    failures = []
    small = 0
    for n, r in product((4, 5, 6), (4, 5)):
        s = EquationSpec.symmetric(1, n, 2, 2, r)
        A = full_grid(s)
        H = build_hypergraph(A, s)
        edges = oracle.hypergraph_edges(A, s)
        direct = oracle.max_codegrees(edges, 4)
        small += 1
        if H.edge_count != len(edges):
            failures.append({"n": n, "r": r, "check": "edge count", "formula": H.edge_count,
                             "enumerated": len(edges)})
        for j in range(2, 5):
            a, b, c = H.max_codegree(j), codegree_by_fixing(H, j), direct[j]
            if not a == b == c:
                failures.append({"n": n, "r": r, "check": "co-degree paths", "j": j,
                                 "tally": a, "fixing": b, "edges": c})
    cases = sweep_cases()
    kh_checks = 0
    for fails, checks in pmap(_codegree_case, cases, workers):
        failures += fails
        kh_checks += checks
    by_check = {}
    for f in failures:
        key = f["check"]
        if key == "co-degree bound":
            key += f" k={f['k']} h={f['h']} r={f['r']} j={f['j']}"
        by_check[key] = by_check.get(key, 0) + 1
    return _result(9, "hypergraph arithmetic",
                   {"small_hypergraphs": small, "sweep_instances": len(cases),
                    "sweep_colors": "kh and kh+1", "top_codegree_checks": kh_checks,
                    "failures_by_kind": dict(sorted(by_check.items()))}, failures)


# -- 10 ----------------------------------------------------------------------

def _template_pair(task):
    P1, P2, sols = task
    return (count_rainbow_subtemplates(P1, sols), count_rainbow_subtemplates(P2, sols),
            count_template_colorings(P1, sols), count_template_colorings(P2, sols))


def criterion_10(workers: int = 1) -> CriterionResult:
    """Monotonicity under subtemplates, and colorings as singleton templates."""
    s = EquationSpec.symmetric(1, 5, 2, 2, 4)
    A = full_grid(s)
    sols = count_solutions(A, s).solutions
    rng = _rng(10)
    tasks = []
    for _ in range(100):
        big = tuple(rng.randrange(16) for _ in range(len(A)))
        small = tuple(m & rng.randrange(16) for m in big)
        tasks.append((Template(A, 4, small), Template(A, 4, big), sols))
    failures = []
    for (P1, P2, _), (r1, r2, g1, g2) in zip(tasks, pmap(_template_pair, tasks, workers)):
        if r1 > r2 or g1 > g2:
            failures.append({"small": list(P1.palettes), "big": list(P2.palettes),
                             "R": [r1, r2], "g": [g1, g2]})
    s4 = s.with_(n=4)
    A4 = full_grid(s4)
    sols4 = count_solutions(A4, s4).solutions
    colorings = 0
    for colors in product(range(1, 5), repeat=len(A4)):
        colorings += 1
        zero = count_rainbow_subtemplates(Template.from_coloring(A4, 4, colors), sols4) == 0
        if zero != is_rainbow_free(colors, sols4, A4):
            failures.append({"coloring": list(colors)})
    return _result(10, "template calculus",
                   {"template_pairs": len(tasks), "colorings": colorings}, failures)


# -- 11 ----------------------------------------------------------------------

TREND_SIZES = tuple(range(4, 13))


def criterion_11(workers: int = 1) -> CriterionResult:
    """Extremal scans for n = 3, 4, 5 and the full-grid trend."""
    failures, scans = [], []
    for n in (3, 4, 5):
        s = EquationSpec.symmetric(1, n, 2, 2, 4)
        scan = extremal_scan(s, workers=workers)
        plain = extremal_scan(s, workers=workers, symmetry=False)
        standalone = count_rainbow_free(full_grid(s), s).g
        full_g = scan.to_json()["full_grid_g"]
        if full_g != standalone:
            failures.append({"n": n, "check": "full grid", "scan": full_g, "standalone": standalone})
        if [r.g for r in scan.rows] != [r.g for r in plain.rows]:
            failures.append({"n": n, "check": "symmetry reduction changed scores"})
        if n in (3, 4) and not scan.full_grid_unique_maximizer:
            failures.append({"n": n, "check": "full grid should be the unique maximizer"})
        block = scan.to_json(top=5)
        scans.append(block)
    trend = full_grid_trend(EquationSpec.symmetric(1, 4, 2, 2, 4), TREND_SIZES, workers=workers)
    return _result(11, "extremal scan report", {"scans": scans, "trend": trend.to_json()}, failures)


# -- 12 ----------------------------------------------------------------------

CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11,
}


def run_criteria(numbers=None, workers: int = 1) -> dict[int, CriterionResult]:
    numbers = sorted(CRITERIA) if numbers is None else sorted(numbers)
    return {i: CRITERIA[i](workers) for i in numbers}


def determinism(first: dict[int, CriterionResult], second: dict[int, CriterionResult],
                workers: tuple[int, int] = (1, 8)) -> CriterionResult:
    """Compare the JSON of two runs of the same criteria."""
    failures = []
    for i in sorted(first):
        a, b = dumps(first[i].to_json()), dumps(second[i].to_json())
        if a != b:
            failures.append({"criterion": i})
    return _result(12, "byte-identical across worker counts",
                   {"criteria_compared": sorted(first), "worker_counts": list(workers)}, failures)


def criterion_12(workers: int = 8) -> CriterionResult:
    return determinism(run_criteria(workers=1), run_criteria(workers=workers), (1, workers))


def run_all(workers: int = 1, alt_workers: int = 8, numbers=None) -> list[CriterionResult]:
    """Criteria 1-11 (or a subset), then determinism against ``alt_workers``."""
    core = None if numbers is None else [i for i in numbers if i != 12]
    first = run_criteria(core, workers)
    out = [first[i] for i in sorted(first)]
    if numbers is None or 12 in numbers:
        second = run_criteria(sorted(first), alt_workers)
        out.append(determinism(first, second, (workers, alt_workers)))
    return out
