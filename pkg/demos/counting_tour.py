"""
Solutions and rainbow-free colorings on small grids
===================================================

Count solution sets of ``x1 + x2 = x3 + x4`` in an interval, then count the
4-colorings with no solution set in four distinct colors.
"""

# %%
from rainbow_sidon import EquationSpec, count_rainbow_free, count_solutions, full_grid
from rainbow_sidon.coloring import census_with_deviation

spec = EquationSpec.symmetric(d=1, n=5, k=2, h=2, r=4)
A = full_grid(spec)
census = count_solutions(A, spec)
print("solution sets in [5]:", census.count)
for sol in census.solutions:
    print("  ", sol.coords(spec.grid), "split", sol.group_labels())

# %%
# The coloring count next to the lower bound from colorings that use at most
# three colors; the ratio approaches 1 as n grows.
for n in range(4, 11):
    s = spec.with_(n=n)
    cc = count_rainbow_free(full_grid(s), s)
    print(n, cc.g, cc.lower_bound, float(cc.ratio_to_asymptotic))

# %%
# Colorings split by how many points leave the color set {1, 2, 3}.
cc = census_with_deviation(full_grid(spec), spec)
print(cc.deviation)

# %%
# A two-dimensional example: the 3x3 grid.
s2 = EquationSpec.symmetric(d=2, n=3, k=2, h=2, r=4)
print("solution sets in [3]^2:", count_solutions(full_grid(s2), s2).count)
print("rainbow-free 4-colorings:", count_rainbow_free(full_grid(s2), s2).g)
