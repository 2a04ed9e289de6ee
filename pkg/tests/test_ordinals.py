import pytest
from hypothesis import assume, given, strategies as st

from conftest import below_w_w, ordinals
from tsirelson_index.ordinals import (
    ONE, OMEGA, ZERO, Ordinal, OrdinalDomainError, OrdinalSyntaxError, add, compare,
    corollary_params, format_ordinal, fund_seq, left_divmod, left_sub, mul, omega_pow,
    parse_ordinal,
)

P = parse_ordinal


# Independent model of ordinals below w^w as {degree: coefficient} dicts.  Sum
# and product follow the textbook rules, written without the CNF code.

def poly(a: Ordinal) -> dict:
    out = {}
    for e, c in a.terms:
        assert e.is_finite
        out[int(e)] = c
    return out


def poly_add(a: dict, b: dict) -> dict:
    if not b:
        return dict(a)
    d = max(b)
    out = {k: v for k, v in a.items() if k > d}
    out[d] = a.get(d, 0) + b[d]
    out.update({k: v for k, v in b.items() if k < d})
    return out


def poly_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    da = max(a)
    out = {}
    for j in sorted(b, reverse=True):
        if j > 0:
            term = {da + j: b[j]}
        else:
            term = dict(a)
            term[da] = a[da] * b[0]
        out = poly_add(out, term)
    return out


@pytest.mark.parametrize("text,want", [
    ("0", ZERO), ("w*2+3", Ordinal([(ONE, 2), (ZERO, 3)])), ("1+w", OMEGA),
    ("ω^2", omega_pow(2)), ("w^(w+1)*2", Ordinal([(OMEGA + 1, 2)])),
])
def test_parse(text, want):
    assert parse_ordinal(text) == want


@pytest.mark.parametrize("text,pos", [("w+", 2), ("", 0), ("w^", 2), ("2*", 1), ("w)", 1)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(OrdinalSyntaxError) as info:
        parse_ordinal(text)
    assert info.value.pos == pos


@pytest.mark.parametrize("a,b,want", [
    ("w", "w", "EQ"), ("w", "w+1", "LT"), ("w^2", "w*5+7", "GT"), ("3", "2", "GT"),
])
def test_compare(a, b, want):
    assert compare(P(a), P(b)) == want


@pytest.mark.parametrize("a,b,want", [
    ("w", "1", "w+1"), ("1", "w", "w"), ("w^2+w", "w^2", "w^2*2"), ("w*3+2", "w", "w*4"),
])
def test_add(a, b, want):
    assert add(P(a), P(b)) == P(want)


@pytest.mark.parametrize("a,b,want", [
    ("w", "2", "w*2"), ("2", "w", "w"), ("w^2*2", "w*3", "w^3*3"), ("w+1", "2", "w*2+1"),
    ("w+1", "w", "w^2"), ("w^w", "w", "w^(w+1)"),
])
def test_mul(a, b, want):
    assert mul(P(a), P(b)) == P(want)


def test_omega_pow():
    assert omega_pow(0) == ONE
    assert omega_pow(1) == OMEGA
    assert omega_pow(OMEGA) == P("w^w")


@pytest.mark.parametrize("a,n,want", [
    ("w", 3, "3"), ("w^2", 3, "w*3"), ("w^w", 3, "w^3"), ("w*2", 4, "w+4"),
    ("w^(w+1)", 2, "w^w*2"), ("w^(w^2)", 2, "w^(w*2)"),
])
def test_fund_seq(a, n, want):
    assert fund_seq(P(a), n) == P(want)


@pytest.mark.parametrize("a", ["0", "3", "w+1"])
def test_fund_seq_requires_limit(a):
    with pytest.raises(OrdinalDomainError):
        fund_seq(P(a), 1)


def test_corollary_examples():
    c = corollary_params(P("w*2"))
    assert (c.gamma, c.eta, c.schreier_case) == (OMEGA, ONE, False)
    c = corollary_params(P("w^2"))
    assert (c.gamma, c.eta) == (ZERO, OMEGA)
    c = corollary_params(3)
    assert c.schreier_case and c.gamma == 2


def test_corollary_rejects_limit_last_exponent():
    with pytest.raises(OrdinalDomainError):
        corollary_params(P("w^w"))
    with pytest.raises(OrdinalDomainError):
        corollary_params(ZERO)


def test_left_divmod_example():
    assert left_divmod(P("w^3*2+w+5"), P("w*2+1")) == (P("w^2*2"), P("w+5"))


def test_ordinals_are_immutable_and_hashable():
    a = P("w+1")
    with pytest.raises(AttributeError):
        a.terms = ()
    assert {a: 1}[P("w+1")] == 1


def test_constructor_rejects_non_cnf():
    with pytest.raises(ValueError):
        Ordinal([(ZERO, 1), (ONE, 1)])
    with pytest.raises(ValueError):
        Ordinal([(ONE, 0)])


@given(below_w_w, below_w_w)
def test_add_mul_against_polynomial_model(a, b):
    assert poly(add(a, b)) == poly_add(poly(a), poly(b))
    assert poly(mul(a, b)) == poly_mul(poly(a), poly(b))


@given(ordinals)
def test_format_parse_round_trip(a):
    assert parse_ordinal(format_ordinal(a)) == a


@given(ordinals, ordinals, ordinals)
def test_laws(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert omega_pow(add(a, b)) == mul(omega_pow(a), omega_pow(b))


@given(ordinals, ordinals, ordinals)
def test_right_strict_monotonicity(a, b, c):
    assume(b < c)
    assert add(a, b) < add(a, c)
    if a:
        assert mul(a, b) < mul(a, c)


@given(ordinals, ordinals)
def test_compare_is_total(a, b):
    r = compare(a, b)
    assert r == {"LT": "GT", "GT": "LT", "EQ": "EQ"}[compare(b, a)]
    assert (r == "EQ") == (a == b)


@given(ordinals, st.integers(1, 6))
def test_fund_seq_increasing_to_limit(a, n):
    assume(a.is_limit)
    assert fund_seq(a, n) < fund_seq(a, n + 1) < a


@given(ordinals, ordinals)
def test_left_sub_and_divmod(a, b):
    lo, hi = sorted((a, b))
    assert add(lo, left_sub(hi, lo)) == hi
    if a:
        q, r = left_divmod(b, a)
        assert add(mul(a, q), r) == b and r < a


@given(ordinals, ordinals, st.integers(1, 4))
def test_corollary_identity(head, e, m):
    # the last CNF term gets the successor exponent e+1
    a = add(head, mul(omega_pow(add(e, ONE)), Ordinal.from_int(m)))
    c = corollary_params(a)
    assert not c.schreier_case
    assert add(c.gamma, mul(c.eta, OMEGA)) == a
