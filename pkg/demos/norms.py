"""
Exact Tsirelson-type norms
==========================

Norms are computed as exact fractions.  The dynamic program and the
level-by-level iteration agree.
"""

from tsirelson_index.families import S, make_F
from tsirelson_index.tsnorm import NormParams, family_norm, iterate_norm, parse_vector, tsirelson_norm

plain = NormParams(0, 1)
squared = NormParams(0, 1, "squared")

# a flat vector sitting on {3, 4, 5}; S_1 admits all three coordinates as one set
x = parse_vector("3:1,4:1,5:1")
print("S_1 norm           ", family_norm(S(1), x))

# level 0 is the sup norm; one level of splitting reaches the fixed point
for n in range(3):
    print(f"level {n}            ", iterate_norm(x, plain, n))
print("fixed point        ", tsirelson_norm(x, plain))

# the squared variant allows twice as many admissible blocks
y = parse_vector(",".join(f"{k}:1" for k in range(1, 9)))
print("plain on e1..e8    ", tsirelson_norm(y, plain))
print("squared on e1..e8  ", tsirelson_norm(y, squared))

# 2^n times the norm dominates rho_n, the F_n family norm
for n in range(3):
    rho = family_norm(make_F(0, 1, n), y)
    print(f"rho_{n} = {rho}, 2^{n} * norm = {2 ** n * tsirelson_norm(y, plain)}")
