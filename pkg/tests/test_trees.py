import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tsirelson_index.errors import BudgetError, DomainError
from tsirelson_index.families import enumerate_members, make_F
from tsirelson_index.trees import (
    BlockTree, GIndex, build_Fn_tree, derived_tree, dump_tree, g_family_index, g_family_member,
    l1_check_branch, load_tree, min_set_family, tree_order,
)
from tsirelson_index.tsnorm import NormParams, SparseVector, family_norm, tsirelson_norm, unit
from tsirelson_index.verify import random_block_tree

Q = Fraction
P01 = NormParams(0, 1)


def units(*coords):
    return tuple(unit(k) for k in coords)


def chain(*coords):
    return BlockTree(units(*coords[:i]) for i in range(1, len(coords) + 1))


def longest_node(T):
    # for a finite tree the order is the height
    return max((len(n) for n in T.nodes), default=0)


def test_small_tree():
    T = BlockTree([units(1), units(1, 2), units(1, 3), units(2)])
    assert len(T) == 4 and T.roots() == [unit(1), unit(2)]
    assert tree_order(T) == 2
    assert derived_tree(T) == BlockTree([units(1)])
    assert min_set_family(T) == {(1,), (1, 2), (1, 3), (2,)}
    assert T.branches() == [units(1, 2), units(1, 3), units(2)]
    assert T.subtree(unit(1)) == BlockTree([units(2), units(3)])


def test_empty_tree():
    T = BlockTree()
    assert tree_order(T) == 0 and not T and T.branches() == []
    assert derived_tree(chain(4)) == T


@pytest.mark.parametrize("nodes", [
    [units(1, 2)],
    [(unit(2), unit(1))],
    [()],
    [(SparseVector(),)],
    [(SparseVector({1: 1, 3: 1}),), (SparseVector({1: 1, 3: 1}), unit(2))],
])
def test_invalid_trees(nodes):
    with pytest.raises(DomainError):
        BlockTree(nodes)


def test_tree_is_immutable():
    T = chain(1, 2)
    with pytest.raises(AttributeError):
        T.nodes = frozenset()


@pytest.mark.parametrize("seed", range(25))
def test_order_drops_by_one_under_derivation(seed):
    T = random_block_tree(random.Random(seed))
    assert tree_order(T) == longest_node(T) >= 1
    assert tree_order(derived_tree(T)) == tree_order(T) - 1


@pytest.mark.parametrize("seed", range(25))
def test_dump_load_round_trip(seed):
    T = random_block_tree(random.Random(seed))
    text = dump_tree(T)
    assert load_tree(text) == T
    assert dump_tree(load_tree(text)) == text


def test_load_format_and_errors():
    text = "# a chain\n1:1\n\n1:1 ; 2:-1/2\n"
    T = load_tree(text)
    assert T == BlockTree([units(1), (unit(1), SparseVector({2: Q(-1, 2)}))])
    with pytest.raises(DomainError, match="line 2"):
        load_tree("1:1\n1:1 ; 2:x\n")
    with pytest.raises(DomainError):
        load_tree("1:1 ; 2:1\n")


def test_load_normalizes():
    T = load_tree("3:1,4:1,5:1\n", normalize_with=P01)
    (x,) = T.roots()
    assert tsirelson_norm(x, P01) == 1 and x[3] == Q(2, 3)


def test_g_family_member():
    FT = [(2, 3), (5,)]
    assert g_family_member(FT, ())
    assert g_family_member(FT, (4, 9)) and g_family_member(FT, (3,))
    assert not g_family_member(FT, (1, 9)) and not g_family_member(FT, (4, 5, 6))


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(1, 9), min_size=1, max_size=4, unique=True).map(sorted),
                min_size=1, max_size=4),
       st.lists(st.integers(1, 14), max_size=5, unique=True).map(sorted),
       st.integers(0, 3))
def test_g_family_hereditary_and_spreading(FT, G, shift):
    FT = [tuple(F) for F in FT]
    G = tuple(G)
    if g_family_member(FT, G):
        for i in range(len(G)):
            assert g_family_member(FT, G[:i] + G[i + 1:])
        assert g_family_member(FT, tuple(g + shift * (i + 1) for i, g in enumerate(G)))


@pytest.mark.parametrize("FT,want", [([(1,)], 1), ([(2, 3), (5,)], 2), ([(1, 2, 3, 4)], 4)])
def test_g_family_index(FT, want):
    gi = g_family_index(FT)
    assert gi.iterative == gi.closed_form == want and gi.agree


def test_g_family_index_of_empty_tree():
    assert g_family_index([]) == g_family_index([()]) == GIndex(0, 0)


@pytest.mark.parametrize("seed", range(15))
def test_g_index_bounds_tree_order(seed):
    T = random_block_tree(random.Random(seed))
    gi = g_family_index(min_set_family(T))
    assert gi.agree and gi.iterative >= tree_order(T)


def test_fn_tree_shape():
    T = build_Fn_tree(0, 1, 1, 6)
    assert len(T) == 20 and tree_order(T) == 3
    assert min_set_family(T) == {F for F in enumerate_members(make_F(0, 1, 1), 6) if F}
    with pytest.raises(BudgetError):
        build_Fn_tree(0, 1, 1, 30)


def test_fn_tree_branches_are_flat_in_rho():
    Fn = make_F(0, 1, 2)
    T = build_Fn_tree(0, 1, 2, 9)
    for branch in T.branches():
        s = sum(branch, SparseVector())
        assert family_norm(Fn, s) == len(branch)


def test_l1_certified_unit_branch():
    v = l1_check_branch(units(3, 4, 5), 2, P01)
    assert v.status == "certified" and v.certificate == {"set": (3, 4, 5), "n": 1, "bound": 2}
    assert v.checks > 100


def test_l1_single_vector():
    assert l1_check_branch(units(1), 1, P01).status == "certified"
    v = l1_check_branch(units(1), Q(1, 2), P01)
    assert v.status == "falsified" and v.witness == (1,)


def test_l1_falsified_witness_is_exact():
    branch = units(1, 2, 3, 4)
    v = l1_check_branch(branch, 1, P01, trials=20, seed=3)
    assert v.status == "falsified"
    total = sum((x * a for x, a in zip(branch, v.witness)), SparseVector())
    assert tsirelson_norm(total, P01) < sum(v.witness)


def test_l1_inconclusive_for_non_unit_branch():
    x = SparseVector({1: Q(1, 2), 2: Q(1, 2)})
    y = SparseVector({5: 1})
    v = l1_check_branch((x, y), 4, P01, trials=10)
    assert v.status in {"inconclusive", "falsified"}
    assert v.status != "certified"


def test_l1_check_is_deterministic():
    a = l1_check_branch(units(2, 5, 8), 2, NormParams(0, 1, "squared"), trials=30, seed=7)
    b = l1_check_branch(units(2, 5, 8), 2, NormParams(0, 1, "squared"), trials=30, seed=7)
    assert a == b
