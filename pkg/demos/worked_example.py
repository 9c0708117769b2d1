"""
A Smith reduction, one Hermite pass at a time
=============================================

A 4x5 integer matrix was built from diag(1, 3, 9) by ten random elementary
steps.  We follow HNF-1 and HNF-2 on it and watch the diagonal.
"""

from math import prod

from kbsmith import ExactMatrix, hnf1, hnf2, minor_gcd_oracle, smith, verify_decomposition

m = ExactMatrix.from_rows([
    [37584, 4383, 29997, -54, 11688],
    [308, 36, 250, 0, 96],
    [-40316, -4707, -33907, -153, -12552],
    [5626, 657, 4778, 27, 1752],
])
print(m)

# The gcd of all 3x3 minors is an invariant of the equivalence class.
G = minor_gcd_oracle(m, 3)
print("G =", G)

# Column-style reduction: a lower triangle of rank 3 over a 1-row rectangle.
h1 = hnf1(m)
print(h1.matrix)
print("diagonal product", prod(h1.matrix.diagonal()[:3]), "=", prod(h1.matrix.diagonal()[:3]) // G, "x G")

# The row-style pass on that triangle already lands on a diagonal matrix,
# and its diagonal product is exactly G.
h2 = hnf2(h1.matrix)
print(h2.matrix)

# KB3 does the same alternation, then sorts out the divisor chain.
dec = smith(m, "kb3", with_transforms=True)
print(dec.run_length)
print(dec.v @ m @ dec.u == dec.s)
for line in verify_decomposition(m, dec).lines():
    print(line)
