"""Command-line front end.

Each subcommand builds one JSON report (written to ``--out`` or stdout) and
optionally a CSV of bulk rows.  Exit status: 0 success, 2 bad arguments or
preconditions, 3 exhausted budget, 4 failed property or acceptance check.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import acceptance
from .cache import cache_buckets, cached_census
from .coloring import (DEFAULT_COLORING_BUDGET, count_deviating, count_rainbow_free,
                       deviation_census)
from .constructions import (DEFAULT_SEED, build_corner_sets, check_solution_free,
                            forcing_property_check, odd_coordinate_set, shifted_subgrid,
                            solution_free_ratio_set)
from .errors import CapacityError, DomainError, PropertyViolation
from .exact import binom_convex, render_fraction
from .extremal import extremal_scan, full_grid_trend
from .grid import Ambient, EquationSpec, PointSet, full_grid
from .hypergraph import build_hypergraph, codegree_function, hypergraph_stats
from .report import Report, dumps
from .solutions import (DEFAULT_BUCKET_BUDGET, count_through_point, degenerate_count_bound_check,
                        greedy_disjoint_family, repeated_tuple_bound, solution_upper_bound,
                        solutions_csv, split_count)
from .stability import regime_report, size_regime
from .templates import (Template, bad_template_bound, classify_template,
                        container_conclusions_check, count_rainbow_subtemplates,
                        count_template_colorings)

EXIT_OK, EXIT_DOMAIN, EXIT_CAPACITY, EXIT_PROPERTY = 0, 2, 3, 4

log = logging.getLogger("rainbow_sidon")


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(p: argparse.ArgumentParser, colors: bool = False) -> None:
    g = p.add_argument_group("equation")
    g.add_argument("--ambient", choices=["box", "torus"], default="box")
    g.add_argument("--d", type=int, default=1, help="dimension")
    g.add_argument("--n", type=int, required=True, help="side length")
    g.add_argument("--k", type=int, default=2, help="number of groups")
    g.add_argument("--h", type=int, default=2, help="summands per group")
    g.add_argument("--groups", type=_ints, help="group sizes h1,h2,... (overrides --k/--h)")
    g.add_argument("--r", type=int, required=colors, help="number of colors")
    io = p.add_argument_group("input and output")
    io.add_argument("--set", dest="set_file", help="point set: one (c1,...,cd) per line, or run-length form")
    io.add_argument("--out", help="write the JSON report here instead of stdout")
    io.add_argument("--csv", help="write bulk rows here")
    run = p.add_argument_group("execution")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--budget-colorings", type=int, default=DEFAULT_COLORING_BUDGET)
    run.add_argument("--budget-buckets", type=int, default=DEFAULT_BUCKET_BUDGET)
    run.add_argument("--cache-dir", help="cache location (default: $BKH_CACHE_DIR)")
    run.add_argument("--timings", action="store_true",
                     help="include wall-clock timings and cache hits (breaks byte-identical reports)")


def _spec(args) -> EquationSpec:
    groups = args.groups if args.groups else (args.h,) * args.k
    return EquationSpec(Ambient(args.ambient), args.d, args.n, groups, args.r)


def _point_set(args, spec: EquationSpec) -> PointSet:
    if not args.set_file:
        return full_grid(spec)
    text = Path(args.set_file).read_text()
    if "rle=" in text:
        A = PointSet.from_rle(text.strip())
        if A.grid != spec.grid:
            raise DomainError(f"set file is on {A.grid}, the equation is on {spec.grid}")
        return A
    return PointSet.from_lines(spec.grid, text)


def _config(args, spec: EquationSpec, A: PointSet) -> dict:
    return {"ambient": spec.ambient.value, "d": spec.d, "n": spec.n, "groups": list(spec.groups),
            "r": spec.r, "set": A.to_rle(), "set_size": len(A), "seed": args.seed,
            "budget_colorings": args.budget_colorings, "budget_buckets": args.budget_buckets}


def _point(text: str | None):
    return None if text is None else _ints(text)


# -- subcommands --------------------------------------------------------------

def cmd_count_solutions(args, rep: Report, spec: EquationSpec, A: PointSet) -> None:
    census, hit = cached_census(A, spec, directory=args.cache_dir, workers=args.workers,
                                budget=args.budget_buckets)
    args.runtime["census_cache_hit"] = hit
    rep.add("count_solutions", "distinct solution sets", census.to_json())
    if spec.is_symmetric:
        k, h, size = spec.k, spec.h, len(A)
        try:
            mm, mhit = cache_buckets(A, spec, directory=args.cache_dir, budget=args.budget_buckets)
            args.runtime["buckets_cache_hit"] = mhit
            rep.add("multiplicity_map", "subset sums",
                    {"h": h, "distinct_sums": len(mm), "total": mm.total})
        except CapacityError as exc:
            rep.add("multiplicity_map", "subset sums", {"skipped": str(exc)})
        cells = (h * spec.n) ** spec.d
        jensen = cells * binom_convex(Fraction(math.comb(size, h), cells), k)
        f, m1, m2 = census.count, census.equal_sum_families, census.repeated_tuples
        rep.add("counting_bounds", "exact counting inequalities", {
            "solution_upper_bound": {"bound": solution_upper_bound(size, k, h),
                                     "holds": f <= solution_upper_bound(size, k, h)},
            "repeated_tuple_bound": {"bound": repeated_tuple_bound(size, k, h),
                                     "holds": m2 <= repeated_tuple_bound(size, k, h)},
            "family_lower_bound": {"value": render_fraction(Fraction(
                (m1 - m2) * math.factorial(k), split_count(k, h))),
                "holds": f * split_count(k, h) >= (m1 - m2) * math.factorial(k)},
            "convexity_bound": {"bound": render_fraction(jensen), "holds": m1 >= jensen}})
        if spec.d >= 2 and spec.groups == (2, 2):
            rep.add("degenerate_count_bound_check", "collinear solutions",
                    degenerate_count_bound_check(A, spec, solutions=census.solutions).to_json())
    v = _point(args.point)
    if v is not None:
        tp = count_through_point(A, v, spec, budget=args.budget_buckets)
        fam = greedy_disjoint_family(tp.family, spec.grid.rank(v))
        rep.add("count_through_point", "solutions through a point",
                {"point": list(v), "count": tp.count, "greedy_disjoint": len(fam.members),
                 "greedy_lower_bound": fam.lower_bound, "max_degree": fam.max_degree})
    if args.csv:
        Path(args.csv).write_text(solutions_csv(census.solutions, spec.grid))


def cmd_count_colorings(args, rep: Report, spec: EquationSpec, A: PointSet) -> None:
    census, hit = cached_census(A, spec, directory=args.cache_dir, workers=args.workers,
                                budget=args.budget_buckets)
    args.runtime["census_cache_hit"] = hit
    kw = dict(solutions=census.solutions, workers=args.workers, budget=args.budget_colorings)
    cc = count_rainbow_free(A, spec, **kw)
    if spec.total - 1 <= spec.r:
        cc.deviation = deviation_census(A, spec, **kw)
    rep.add("count_rainbow_free", "rainbow-free colorings", cc.to_json())
    if args.color_set:
        rep.add("count_deviating", "colorings leaving a color set",
                {"color_set": list(args.color_set),
                 "count": count_deviating(A, args.color_set, spec, **kw)})
    if spec.is_symmetric and spec.n >= 2 and spec.ambient is Ambient.BOX:
        rep.add("size_regime", "sparse, medium and dense sizes",
                {"regime": size_regime(len(A), spec).value, **regime_report(spec).to_json()})


def cmd_hypergraph_stats(args, rep: Report, spec: EquationSpec, A: PointSet) -> None:
    census, hit = cached_census(A, spec, directory=args.cache_dir, workers=args.workers,
                                budget=args.budget_buckets)
    args.runtime["census_cache_hit"] = hit
    H = build_hypergraph(A, spec, solutions=census.solutions)
    rep.add("hypergraph_stats", "rainbow hypergraph", hypergraph_stats(H).to_json())
    if args.tau:
        tau = Fraction(args.tau)
        rep.add("codegree_function", "co-degree function at a given tau",
                {"tau": render_fraction(tau), "value": render_fraction(codegree_function(H, tau))})


def _templates(path: str, A: PointSet, r: int) -> list[Template]:
    text = Path(path).read_text()
    chunks = [c for c in text.split("---") if c.strip()]
    return [Template.from_lines(A, r, c) for c in chunks]


def cmd_template_check(args, rep: Report, spec: EquationSpec, A: PointSet) -> None:
    census, hit = cached_census(A, spec, directory=args.cache_dir, workers=args.workers,
                                budget=args.budget_buckets)
    args.runtime["census_cache_hit"] = hit
    sols = census.solutions
    templates = _templates(args.template, A, spec.r) if args.template else [Template.full(A, spec.r)]
    rows = []
    for P in templates:
        rows.append({"classification": classify_template(P, spec).to_json(),
                     "rainbow_subtemplates": count_rainbow_subtemplates(P, sols, workers=args.workers),
                     "colorings": count_template_colorings(P, sols, budget=args.budget_colorings),
                     "palette_bound": bad_template_bound(P, spec)})
    rep.add("classify_template", "templates", rows)
    if args.containers:
        containers = _templates(args.containers, A, spec.r)
        cover = _templates(args.cover, A, spec.r) if args.cover else templates
        rep.add("container_conclusions_check", "container conclusions",
                container_conclusions_check(containers, cover, spec, sols).to_json())


def cmd_constructions(args, rep: Report, spec: EquationSpec, A: PointSet) -> None:
    kind = args.kind
    if kind == "corner":
        v = _point(args.point) or (1,) * spec.d
        cc = build_corner_sets(v, spec)
        rep.add("build_corner_sets", "corner windows", cc.to_json())
        rep.add("forcing_property_check", "forced points",
                forcing_property_check(cc, args.samples, args.seed).to_json())
        if args.check_bound:
            tp = count_through_point(full_grid(spec), v, spec, budget=args.budget_buckets)
            rep.add("corner_lower_bound", "solutions through the corner",
                    {"through_point": tp.count, "bound": cc.lower_bound(),
                     "holds": tp.count >= cc.lower_bound()})
    elif kind in ("ratio", "odd"):
        S = solution_free_ratio_set(spec) if kind == "ratio" else odd_coordinate_set(spec)
        chk = check_solution_free(S, spec, budget=args.budget_buckets)
        rep.add("solution_free_ratio_set" if kind == "ratio" else "odd_coordinate_set",
                "solution-free set", {"set": S.to_rle(), "size": len(S), **chk.to_json()})
        if args.csv:
            Path(args.csv).write_text(S.to_lines())
        if not chk.solution_free:
            raise PropertyViolation(f"{kind} set has {chk.solutions} solutions")
    elif kind == "subgrid":
        v = _point(args.point)
        if v is None:
            raise DomainError("--point is required for the subgrid construction")
        m = shifted_subgrid(A, v, spec)
        small = spec.with_(n=m.side)
        big = count_through_point(m.window, v, spec, budget=args.budget_buckets).count
        little = count_through_point(full_grid(small), m.corner, small,
                                     budget=args.budget_buckets).count
        rep.add("shifted_subgrid", "half-size subgrid",
                {"window": m.window.to_rle(), "side": m.side, "corner": list(m.corner),
                 "through_point_window": big, "through_point_small_grid": little,
                 "equal": big == little})
        if big != little:
            raise PropertyViolation("translation changed the through-point count")


def cmd_extremal_scan(args, rep: Report, spec: EquationSpec, A: PointSet) -> None:
    scan = extremal_scan(spec, workers=args.workers, budget=args.budget_colorings)
    rep.add("extremal_scan", "subsets with the most rainbow-free colorings", scan.to_json())
    if args.trend_max:
        trend = full_grid_trend(spec, range(max(2, spec.total), args.trend_max + 1),
                                workers=args.workers, budget=args.budget_colorings)
        rep.add("full_grid_trend", "full grid against its asymptotic count", trend.to_json())
    if args.csv:
        Path(args.csv).write_text(scan.to_csv())


def cmd_verify_all(args) -> int:
    numbers = None if args.criteria is None else list(args.criteria)
    results = acceptance.run_all(workers=args.workers, alt_workers=args.alt_workers, numbers=numbers)
    for res in results:
        print(res.line())
    if args.out:
        data = {"schema_version": 1, "command": "verify-all", "preset": args.preset,
                "criteria": [r.to_json() for r in results]}
        Path(args.out).write_text(dumps(data))
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


COMMANDS = {
    "count-solutions": cmd_count_solutions,
    "count-colorings": cmd_count_colorings,
    "hypergraph-stats": cmd_hypergraph_stats,
    "template-check": cmd_template_check,
    "constructions": cmd_constructions,
    "extremal-scan": cmd_extremal_scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rainbow-sidon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("count-solutions", help="count solution sets")
    _common(p)
    p.add_argument("--point", help="also count solutions through this point, e.g. 1,3")
    p = sub.add_parser("count-colorings", help="count rainbow-free colorings")
    _common(p, colors=True)
    p.add_argument("--color-set", type=_ints, help="count colorings using a color outside this set")
    p = sub.add_parser("hypergraph-stats", help="rainbow hypergraph statistics")
    _common(p, colors=True)
    p.add_argument("--tau", help="evaluate the co-degree function at this rational")
    p = sub.add_parser("template-check", help="classify templates and check containers")
    _common(p, colors=True)
    p.add_argument("--template", help="template file, templates separated by '---' lines")
    p.add_argument("--containers", help="container collection file")
    p.add_argument("--cover", help="templates that must be covered (default: --template)")
    p = sub.add_parser("constructions", help="explicit constructions")
    _common(p)
    p.add_argument("--kind", choices=["corner", "ratio", "odd", "subgrid"], required=True)
    p.add_argument("--point", help="corner or anchor point, e.g. 1,200")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--check-bound", action="store_true",
                   help="compare the corner bound with the exact through-point count")
    p = sub.add_parser("extremal-scan", help="score every subset of a small grid")
    _common(p, colors=True)
    p.add_argument("--trend-max", type=int, help="also report the full-grid trend up to this n")
    p = sub.add_parser("verify-all", help="run the acceptance criteria")
    p.add_argument("--preset", choices=["desk"], default="desk")
    p.add_argument("--criteria", type=_ints, help="subset of criteria, e.g. 1,4,12")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--alt-workers", type=int, default=8,
                   help="second worker count for the determinism comparison")
    p.add_argument("--out", help="write the JSON report here")
    return parser


def run(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-all":
            return cmd_verify_all(args)
        spec = _spec(args)
        A = _point_set(args, spec)
        rep = Report(args.command, _config(args, spec, A))
        args.runtime = {}
        start = time.perf_counter()
        COMMANDS[args.command](args, rep, spec, A)
        if args.timings:
            rep.timings = {"total_seconds": time.perf_counter() - start, **args.runtime}
        text = rep.dumps()
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except PropertyViolation as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except (DomainError, OSError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
