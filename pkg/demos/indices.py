"""
Cantor-Bendixson indices of Schreier-type families
==================================================

Indices come from symbolic rules and are checked against finite derivatives.
"""

from tsirelson_index.families import (
    CardCap, Compose, Deriv, S, derivative_member, derivative_simplify, format_family, index,
    make_F, parse_family,
)
from tsirelson_index.ordinals import format_ordinal, parse_ordinal

for text in ("S(1)", "S(2)", "S(w)", "S(1)[S(1)]", "S(1)^2"):
    print(f"{text:12} index {format_ordinal(index(parse_family(text)))}")

# F_n nests S_beta n times around S_alpha; its index is w^(alpha + beta*n)
alpha, beta = parse_ordinal("w"), parse_ordinal("2")
for n in range(4):
    print(f"F_{n}  {format_ordinal(index(make_F(alpha, beta, n)))}"
          f"   F'_{n}  {format_ordinal(index(make_F(alpha, beta, n, True)))}")

# with beta = 0 the squared step doubles the index every time
print("beta = 0, F'_3:", format_ordinal(index(make_F(1, 0, 3, True))))

# derivatives of M[CardCap(k)] peel off whole outer steps
M = Compose(S(1), CardCap(2))
simplified = derivative_simplify(Deriv(M, parse_ordinal("4")))
print(format_family(M), "-> 4th derivative", format_family(simplified))
print("{5} in it:", derivative_member(M, (5,), 4))
