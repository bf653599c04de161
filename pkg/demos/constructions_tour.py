"""
Explicit constructions
======================

Corner windows with the forcing property, a half-size subgrid around a
point, and two solution-free sets for equations with unequal group sizes.
"""

# %%
from rainbow_sidon import (Ambient, EquationSpec, build_corner_sets, forcing_property_check,
                           full_grid, odd_coordinate_set, shifted_subgrid, solution_free_ratio_set)
from rainbow_sidon.constructions import check_solution_free

spec = EquationSpec.symmetric(d=2, n=200, k=2, h=3)
cc = build_corner_sets((1, 200), spec)
for block in cc.to_json()["sets"]:
    print(block["name"], block["windows"], block["size"])
print(forcing_property_check(cc, samples=1000).to_json())

# %%
small = EquationSpec.symmetric(d=1, n=10, k=2, h=2)
for v in (3, 8):
    m = shifted_subgrid(full_grid(small), (v,), small)
    print(v, [p[0] for p in m.window.points], "corner", m.corner)

# %%
for groups in ((1, 2), (2, 3), (3, 4)):
    s = EquationSpec(Ambient.BOX, 1, 12, groups)
    ratio = solution_free_ratio_set(s)
    print(groups, "ratio set", [p[0] for p in ratio.points],
          check_solution_free(ratio, s).to_json())
    if groups[0] % 2 != groups[1] % 2:
        odd = odd_coordinate_set(s)
        print(groups, "odd set", len(odd), check_solution_free(odd, s).solution_free)
