"""
Homology with explicit cycles: the Klein bottle
===============================================

The usual CW structure has one vertex, two edges a, b and one face glued
along a b a^-1 b.  The cellular boundaries are d1 = 0 and d2 = (0, 2)^T,
so H1 = ker d1 / im d2 should be Z + Z/2.
"""

from kbsmith import ExactMatrix
from kbsmith.homology import format_vector, homology_group

d1 = ExactMatrix.zeros(1, 2)
d2 = ExactMatrix.from_rows([[0], [2]])

h1 = homology_group(d1, d2)
print("H1 =", h1.group_string())
for order, g in zip(h1.orders, h1.generators):
    print("order", order or "inf", "cycle", format_vector(g))

# The same group survives any change of basis of the edges.
p = ExactMatrix.from_rows([[2, 1], [1, 1]])
p_inv = ExactMatrix.from_rows([[1, -1], [-1, 2]])
print(homology_group(d1 @ p_inv, p @ d2).group_string())

# H2: nothing above the face, and d2 is injective.
print("H2 =", homology_group(d2, ExactMatrix.zeros(1, 0)).group_string())
