"""On-disk cache for sum tables and solution censuses.

Entries are JSON files keyed by the equation, the ambient grid and the
point-set digest.  A file that fails to parse or whose stored key does not
match is discarded with a warning and rebuilt.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
from pathlib import Path

from .grid import EquationSpec, PointSet
from .solutions import (DEFAULT_BUCKET_BUDGET, MultiplicityMap, Solution, SolutionCensus,
                        count_solutions, multiplicity_map)

log = logging.getLogger(__name__)

#: Environment variable overriding the cache location.
CACHE_ENV = "BKH_CACHE_DIR"


def cache_dir(override: str | os.PathLike | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "rainbow_sidon"


def _key(kind: str, spec: EquationSpec, A: PointSet, extra: str = "") -> str:
    text = f"{kind}|{spec.ambient.value}|{spec.d}|{spec.n}|{','.join(map(str, spec.groups))}|{extra}|{A.digest()}"
    return hashlib.sha256(text.encode()).hexdigest()


def _load(path: Path, key: str):
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        if data.get("key") != key:
            raise ValueError("stored key does not match")
        return data["payload"]
    except (ValueError, KeyError, TypeError) as exc:
        log.warning("discarding corrupt cache entry %s (%s); rebuilding", path, exc)
        return None


def _store(path: Path, key: str, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps({"key": key, "payload": payload}, sort_keys=True))
    tmp.replace(path)


def cache_buckets(A: PointSet, spec: EquationSpec, h: int | None = None, *, directory=None,
                  budget: int = DEFAULT_BUCKET_BUDGET) -> tuple[MultiplicityMap, bool]:
    """Sum table for ``h``-subsets (default: the first group size); returns (table, cache hit)."""
    h = spec.groups[0] if h is None else h
    key = _key("buckets", spec, A, str(h))
    path = cache_dir(directory) / f"buckets-{key[:32]}.json"
    data = _load(path, key)
    if data is not None:
        try:
            mm = MultiplicityMap.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            log.warning("cache entry %s is malformed (%s); rebuilding", path, exc)
        else:
            if mm.source == A.digest() and mm.total == math.comb(len(A), h):
                return mm, True
            log.warning("cache entry %s failed its consistency check; rebuilding", path)
    mm = multiplicity_map(A, h, budget=budget)
    _store(path, key, mm.to_json())
    return mm, False


def _census_json(c: SolutionCensus) -> dict:
    out = c.to_json()
    out["solutions"] = [[list(s.points), [list(g) for g in s.witness]] for s in c.solutions]
    return out


def _census_from(data: dict) -> SolutionCensus:
    sols = [Solution(tuple(p), tuple(tuple(g) for g in w)) for p, w in data["solutions"]]
    return SolutionCensus(int(data["count"]), data["equal_sum_families"], data["repeated_tuples"],
                          data["partitions"], sols)


def cached_census(A: PointSet, spec: EquationSpec, *, directory=None, workers: int = 1,
                  budget: int = DEFAULT_BUCKET_BUDGET) -> tuple[SolutionCensus, bool]:
    """Solution census with solutions; a hit skips the bucket build entirely."""
    key = _key("census", spec, A)
    path = cache_dir(directory) / f"census-{key[:32]}.json"
    data = _load(path, key)
    if data is not None:
        try:
            census = _census_from(data)
            if census.count == len(census.solutions):
                for s in census.solutions:
                    s.validate(spec)
                return census, True
        except Exception as exc:  # any malformed payload is rebuilt
            log.warning("cache entry %s is malformed (%s); rebuilding", path, exc)
        else:
            log.warning("cache entry %s failed its consistency check; rebuilding", path)
    census = count_solutions(A, spec, workers=workers, budget=budget)
    _store(path, key, _census_json(census))
    return census, False
