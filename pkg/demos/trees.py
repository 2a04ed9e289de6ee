"""
Block trees and l1 branches
===========================

The unit-vector tree over F_n has order that grows with the ground set, and
every branch satisfies a lower l1 estimate with constant 2^n.
"""

from tsirelson_index.trees import build_Fn_tree, g_family_index, l1_check_branch, min_set_family, tree_order
from tsirelson_index.tsnorm import NormParams

p = NormParams(0, 1)
for n in range(3):
    T = build_Fn_tree(0, 1, n, 9)
    gi = g_family_index(min_set_family(T))
    print(f"n={n}: {len(T)} nodes, order {tree_order(T)}, index of G(T) {gi.iterative}")

T = build_Fn_tree(0, 1, 1, 8)
longest = max(T.branches(), key=len)
print("longest branch:", [x.support[0] for x in longest])
print("K = 2:", l1_check_branch(longest, 2, p, trials=50).status)

verdict = l1_check_branch(longest, 1, p, trials=50)
print("K = 1:", verdict.status, "witness", [str(a) for a in verdict.witness])
