"""
Which subsets have the most rainbow-free colorings?
===================================================

Score every subset of [n] for small n, and follow the full interval's count
against the count from colorings that use exactly three colors.
"""

# %%
from rainbow_sidon import EquationSpec, extremal_scan, full_grid_trend

for n in (3, 4, 5, 6):
    scan = extremal_scan(EquationSpec.symmetric(d=1, n=n, k=2, h=2, r=4))
    top = scan.ranking()[:3]
    print(n, "unique maximizer is [n]:", scan.full_grid_unique_maximizer,
          [(row.A.to_rle(), row.g) for row in top])

# %%
trend = full_grid_trend(EquationSpec.symmetric(d=1, n=4, k=2, h=2, r=4), range(4, 13))
for p in trend.points:
    print(p.n, p.g, p.to_json()["approx"])
print("nondecreasing:", trend.nondecreasing)
