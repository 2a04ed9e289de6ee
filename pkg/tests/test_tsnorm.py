import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from tsirelson_index.errors import BudgetError, DomainError
from tsirelson_index.families import CardCap, S, enumerate_members, make_F, member, parse_family
from tsirelson_index.tsnorm import (
    NormCache, NormParams, SparseVector, _family_norm_brute, _key, admissible_cuts,
    family_norm, format_vector, implicit_check, iterate_norm, normalize, parse_vector, sigma,
    tsirelson_norm, unit,
)

Q = Fraction
PLAIN01 = NormParams(0, 1)
PARAMS = [NormParams(0, 1), NormParams(0, 1, "squared"), NormParams(1, 1), NormParams(0, 2),
          NormParams(1, 2, "squared")]


def vec(*entries):
    return SparseVector(dict(entries))


def ones(*coords):
    return SparseVector({k: 1 for k in coords})


# -- naive oracle: arbitrary (not interval) admissible block sequences -----------------------

def naive_norm(x: SparseVector, p: NormParams, n: int) -> Fraction:
    return _naive(_key(x), p, n)


@lru_cache(maxsize=None)
def _naive(key, p, n):
    base = _family_norm_brute(p.base_family, key)
    if n == 0 or not key:
        return base
    best = Fraction(0)
    # each support point is skipped, joins the current block, or opens a new one
    for labels in itertools.product((0, 1, 2), repeat=len(key)):
        blocks = []
        for (c, v), lab in zip(key, labels):
            if lab == 2 or (lab == 1 and not blocks):
                blocks.append([(c, v)])
            elif lab == 1:
                blocks[-1].append((c, v))
        if not blocks or not member(p.admissibility, tuple(b[0][0] for b in blocks)):
            continue
        best = max(best, sum((_naive(tuple(b), p, n - 1) for b in blocks), Fraction(0)))
    return max(base, best / 2)


# -- vectors -------------------------------------------------------------------------------

def test_sparse_vector_basics():
    x = vec((3, Q(1)), (1, Q(-1, 2)), (2, 0))
    assert x.items == ((1, Q(-1, 2)), (3, Q(1)))
    assert x.support == (1, 3) and len(x) == 2
    assert (x - x) == SparseVector() and not (x - x)
    assert x.l1() == Q(3, 2) and x.sup() == 1
    assert x.restrict([3, 4]) == unit(3)
    assert (x * 2)[1] == -1 and x[7] == 0
    with pytest.raises(AttributeError):
        x.foo = 1


@pytest.mark.parametrize("text", ["3:1,4:1,5:-1/2", "1:7/3", "", "10:-1"])
def test_vector_round_trip(text):
    assert format_vector(parse_vector(text)) == text


@pytest.mark.parametrize("bad", ["3", "0:1", "1:1,1:2", "a:1", "1:1/0"])
def test_vector_parse_errors(bad):
    with pytest.raises(DomainError):
        parse_vector(bad)


def test_params_validation():
    with pytest.raises(DomainError):
        NormParams(0, 0)
    with pytest.raises(DomainError):
        NormParams(0, 1, "cubed")
    assert NormParams(0, 1, "squared").admissibility == parse_family("S(1)^2")


# -- sigma and family norms --------------------------------------------------------------------

def test_sigma_examples():
    assert sigma((1, 2), ones(1, 2, 3)) == 2
    assert sigma((), ones(1)) == 0
    assert sigma((3,), vec((3, Q(-5, 2)))) == Q(5, 2)


def test_family_norm_examples():
    assert family_norm(S(1), ones(1, 2, 3)) == 2
    assert family_norm(S(1), ones(3, 4, 5)) == 3
    assert family_norm(S(0), vec((2, Q(-3)), (5, Q(2)))) == 3
    assert family_norm(CardCap(2), vec((1, Q(1)), (2, Q(5)), (3, Q(4)))) == 9


@pytest.mark.parametrize("expr", ["S(0)", "S(1)", "S(2)", "S(w)", "A(2)", "E", "S(1)^2",
                                  "S(1)[S(1)]", "S(2)[S(1)^2]"])
def test_family_norm_against_subset_brute_force(expr):
    M, rng = parse_family(expr), random.Random(3)
    for _ in range(60):
        coords = rng.sample(range(1, 12), rng.randint(1, 7))
        x = SparseVector({k: Q(rng.randint(-5, 5), rng.randint(1, 3)) for k in coords})
        assert family_norm(M, x) == _family_norm_brute(M, _key(x))


# -- iterate_norm and the DP -------------------------------------------------------------------

def test_spec_values():
    x = ones(3, 4, 5)
    assert iterate_norm(x, PLAIN01, 0) == 1
    assert iterate_norm(x, PLAIN01, 1) == Q(3, 2)
    assert tsirelson_norm(x, PLAIN01) == Q(3, 2)
    assert tsirelson_norm(ones(2, 3), PLAIN01) == 1
    for p in PARAMS:
        assert tsirelson_norm(unit(7), p) == 1


FROZEN = [
    (ones(*range(3, 9)), PLAIN01, Q(2)),
    (ones(*range(4, 10)), PLAIN01, Q(5, 2)),
    (ones(*range(1, 9)), PLAIN01, Q(2)),
    (ones(*range(1, 9)), NormParams(0, 1, "squared"), Q(3)),
    (ones(*range(1, 8)), NormParams(1, 1), Q(4)),
    (ones(*range(2, 8)), NormParams(0, 2), Q(3)),
]


@pytest.mark.parametrize("x,p,want", FROZEN, ids=str)
def test_frozen_values(x, p, want):
    # derived with naive_norm, then frozen
    assert tsirelson_norm(x, p) == want


def test_frozen_values_match_naive_oracle():
    for x, p, want in FROZEN[:2]:
        assert naive_norm(x, p, len(x)) == want


@pytest.mark.parametrize("p", PARAMS[:4], ids=str)
def test_dp_matches_naive_oracle_small(p):
    rng = random.Random(11)
    for _ in range(40):
        coords = sorted(rng.sample(range(1, 9), rng.randint(1, 5)))
        x = SparseVector({k: Q(rng.randint(-4, 4) or 1, rng.randint(1, 2)) for k in coords})
        assert tsirelson_norm(x, p) == naive_norm(x, p, len(x))


@pytest.mark.parametrize("p", PARAMS, ids=str)
def test_dp_matches_iterate_random(p):
    rng = random.Random(5)
    oc = {}
    for _ in range(60):
        coords = rng.sample(range(1, 11), rng.randint(1, 7))
        x = SparseVector({k: Q(rng.randint(-6, 6) or 1, rng.randint(1, 4)) for k in coords})
        assert tsirelson_norm(x, p) == iterate_norm(x, p, len(x), cache=oc)


@pytest.mark.parametrize("p", PARAMS[:3], ids=str)
def test_iterates_increase_stabilise_and_stay_below_l1(p):
    rng = random.Random(9)
    for _ in range(25):
        coords = rng.sample(range(1, 10), rng.randint(1, 6))
        x = SparseVector({k: Q(rng.randint(1, 6), rng.randint(1, 3)) for k in coords})
        levels = [iterate_norm(x, p, n) for n in range(len(x) + 3)]
        assert levels == sorted(levels) and levels[-1] <= x.l1()
        assert set(levels[len(x):]) == {tsirelson_norm(x, p)}


def test_budget_caps():
    big = ones(*range(1, 20))
    with pytest.raises(BudgetError):
        tsirelson_norm(big, PLAIN01)
    with pytest.raises(BudgetError):
        iterate_norm(ones(*range(1, 12)), PLAIN01, 2)
    assert tsirelson_norm(ones(3, 4, 5), PLAIN01, max_support=3) == Q(3, 2)


# -- structural properties ---------------------------------------------------------------------

vectors = st.dictionaries(st.integers(1, 12), st.fractions(-3, 3, max_denominator=4),
                          min_size=1, max_size=7).map(SparseVector)


@given(vectors, st.sampled_from(PARAMS[:4]), st.data())
def test_unconditional(x, p, data):
    signs = {k: data.draw(st.sampled_from([1, -1, 0])) for k in x.support}
    y = SparseVector({k: v * signs[k] for k, v in x.items})
    assert tsirelson_norm(y, p) <= tsirelson_norm(x, p)


@given(vectors, st.sampled_from([NormParams(0, 1), NormParams(1, 1), NormParams(0, 2)]))
def test_squared_dominates_plain(x, p):
    assert tsirelson_norm(x, p.with_variant("squared")) >= tsirelson_norm(x, p)


@given(vectors, vectors, st.fractions(-3, 3, max_denominator=5))
def test_homogeneous_and_subadditive(x, y, c):
    p = PLAIN01
    assert tsirelson_norm(x * c, p) == abs(c) * tsirelson_norm(x, p)
    if len((x + y).support) <= 12:
        assert tsirelson_norm(x + y, p) <= tsirelson_norm(x, p) + tsirelson_norm(y, p)


@given(st.lists(st.fractions(-3, 3, max_denominator=3), min_size=1, max_size=6),
       st.lists(st.integers(0, 3), min_size=6, max_size=6))
def test_subsequence_monotone_in_squared_space(coeffs, gaps):
    p = NormParams(0, 1, "squared")
    base = SparseVector({k + 1: a for k, a in enumerate(coeffs)})
    f, pos = [], 0
    for g in gaps[:len(coeffs)]:
        pos += 1 + g
        f.append(pos)
    moved = SparseVector({f[k]: a for k, a in enumerate(coeffs)})
    assert tsirelson_norm(moved, p) >= tsirelson_norm(base, p)


@pytest.mark.parametrize("alpha", [1, 2])
def test_schreier_space_domination(alpha):
    # normalised block basis (x_i) in the S_alpha norm, k_i = max supp x_i
    rng, M = random.Random(alpha), S(alpha)
    for _ in range(120):
        bounds = sorted(rng.sample(range(2, 13), rng.randint(0, 4)))
        edges = [1] + bounds + [13]
        xs = []
        for lo, hi in zip(edges, edges[1:]):
            x = SparseVector({k: Q(rng.randint(-3, 3), rng.randint(1, 2)) for k in range(lo, hi)})
            if x:
                xs.append(x / family_norm(M, x))
        a = [Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in xs]
        lhs = family_norm(M, sum((x * c for x, c in zip(xs, a)), SparseVector()))
        rhs = family_norm(M, SparseVector({x.support[-1]: c for x, c in zip(xs, a)}))
        assert lhs <= rhs


# -- fixed point, cuts, normalisation ------------------------------------------------------------

def test_implicit_check_examples():
    assert implicit_check(ones(2, 3), PLAIN01)
    for p in PARAMS:
        assert implicit_check(unit(1), p)
    rng = random.Random(2)
    p = NormParams(1, 1)
    for _ in range(30):
        coords = rng.sample(range(1, 12), rng.randint(1, 8))
        x = SparseVector({k: Q(rng.randint(-5, 5) or 2, rng.randint(1, 4)) for k in coords})
        assert implicit_check(x, p)


def test_admissible_cuts_examples():
    cuts = list(admissible_cuts((3, 4, 5), S(1)))
    for want in ([(3,), (4,), (5,)], [(3,), (4, 5)], [(3, 4, 5)], [(4,), (5,)], [(5,)]):
        assert want in cuts
    assert len(cuts) == len({tuple(c) for c in cuts})
    cuts = list(admissible_cuts((1, 2), S(1)))
    assert sorted(cuts) == [[(1, 2)], [(2,)]]
    assert list(admissible_cuts((7,), S(2))) == [[(7,)]]


def test_admissible_cuts_are_exactly_the_admissible_suffix_partitions():
    support = (2, 3, 5, 6, 8)
    M = S(1)
    got = {tuple(c) for c in admissible_cuts(support, M)}
    want = set()
    for r in range(1, 6):
        for starts in itertools.combinations(range(5), r):
            if member(M, tuple(support[i] for i in starts)):
                ends = starts[1:] + (5,)
                want.add(tuple(support[a:b] for a, b in zip(starts, ends)))
    assert got == want


def test_normalize():
    assert normalize(unit(1), PLAIN01) == unit(1)
    assert normalize(unit(1) * 2, PLAIN01) == unit(1)
    assert normalize(ones(3, 4, 5), PLAIN01) == ones(3, 4, 5) * Q(2, 3)
    with pytest.raises(DomainError):
        normalize(SparseVector(), PLAIN01)


def test_shared_cache_is_consistent_across_threads():
    rng = random.Random(4)
    xs = [SparseVector({k: Q(rng.randint(-3, 3) or 1, 2) for k in rng.sample(range(1, 12), 8)})
          for _ in range(40)]
    serial = [tsirelson_norm(x, PLAIN01) for x in xs]
    cache = NormCache()
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda x: tsirelson_norm(x, PLAIN01, cache=cache), xs * 2))
    assert threaded == serial * 2
    assert cache.stats()["hits"] > 0


def test_rho_is_family_norm_of_F_n():
    # rho_n on a unit-vector sum over F in F_n equals |F|
    Fn = make_F(0, 1, 2)
    for F in enumerate_members(Fn, 8):
        if F:
            assert family_norm(Fn, ones(*F)) == len(F)
