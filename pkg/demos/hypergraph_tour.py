"""
The rainbow hypergraph
======================

Vertices are (point, color) pairs and edges are rainbow-colored solution
sets.  Co-degrees are compared with their case-by-case bounds.
"""

# %%
from fractions import Fraction

from rainbow_sidon import EquationSpec, build_hypergraph, codegree_function, full_grid
from rainbow_sidon import hypergraph_stats

spec = EquationSpec.symmetric(d=1, n=6, k=2, h=2, r=5)
H = build_hypergraph(full_grid(spec), spec)
stats = hypergraph_stats(H)
print(stats.vertices, stats.edges, stats.avg_degree, stats.delta)
for b in stats.bounds:
    print(b.to_json())
print("co-degree function at 1/2:", codegree_function(H, Fraction(1, 2)))

# %%
# For j = kh - 1 the summed bound does not depend on |A|, and one more color
# than kh pushes the exact co-degree above it.
s = EquationSpec.symmetric(d=1, n=17, k=2, h=3, r=7)
H = build_hypergraph(full_grid(s), s)
print([b.to_json() for b in hypergraph_stats(H).bounds if b.j == 5])
