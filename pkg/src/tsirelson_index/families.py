"""Regular families of finite subsets of the positive integers.

Families are symbolic expressions built from Schreier classes, cardinality
caps, the composition ``M[N]``, the pair ``(M, N)`` and Cantor-Bendixson
derivatives.  A finite set is a strictly increasing tuple of positive
integers (a ``FinSet``).

Membership for composite families searches block decompositions into
consecutive runs and prunes on the outer family being hereditary; every
family built from the constructors here is regular, which
:func:`regularity_check` verifies on finite truncations.
"""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

from .errors import BudgetError, DomainError, UnsupportedFamily
from .ordinals import (
    ONE, ZERO, FundamentalSequence, Ordinal, OrdinalSyntaxError, add,
    as_ordinal, format_ordinal, fund_seq, left_divmod, left_sub, mul,
    omega_pow, parse_ordinal,
)

FinSet = tuple
ENUMERATION_CAP = 24


def finset(values: Iterable[int]) -> FinSet:
    """Normalise ``values`` into a FinSet (sorted tuple of distinct positives)."""
    out = tuple(sorted(set(int(v) for v in values)))
    if out and out[0] < 1:
        raise DomainError(f"finite sets live in the positive integers, got {out[0]}")
    return out


# -- expression nodes ----------------------------------------------------------

def _family(cls):
    cls = dataclass(frozen=True)(cls)

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + tuple(
                getattr(self, f.name) for f in dataclasses.fields(self)))
            object.__setattr__(self, "_h", h)
        return h

    cls.__hash__ = __hash__
    cls.__str__ = lambda self: format_family(self)
    return cls


@_family
class Schreier:
    """The Schreier class ``S_alpha``.

    ``rule`` selects the limit-stage quantifier: ``"card"`` takes
    ``F in S_{alpha[n]}`` for some ``n <= |F|``, ``"min"`` uses ``n <= min F``.
    """
    alpha: Ordinal
    rule: str = "card"
    fseq: FundamentalSequence = field(default=fund_seq, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_ordinal(self.alpha))
        if self.rule not in ("card", "min"):
            raise ValueError(f"unknown limit rule {self.rule!r}")


@_family
class CardCap:
    """All sets with at most ``k`` elements."""
    k: int


@_family
class Compose:
    """``outer[inner]``: unions of inner-blocks arranged outer-admissibly."""
    outer: object
    inner: object


@_family
class Pair:
    """``(first, second)``: unions ``A u B`` with ``A < B``."""
    first: object
    second: object


@_family
class Deriv:
    base: object
    order: Ordinal

    def __post_init__(self):
        object.__setattr__(self, "order", as_ordinal(self.order))


@_family
class EmptyOnly:
    """The family ``{{}}``."""


@_family
class Void:
    """The empty family (what ``{{}}`` derives to)."""


Family = Union[Schreier, CardCap, Compose, Pair, Deriv, EmptyOnly, Void]


def S(alpha, rule: str = "card") -> Schreier:
    return Schreier(as_ordinal(alpha), rule)


def square(M: Family) -> Pair:
    """``M^2 = (M, M)``."""
    return Pair(M, M)


def make_F(alpha, beta, n: int, primed: bool = False) -> Family:
    """``F_n`` (or ``F'_n`` when ``primed``): ``F_0 = S_alpha``,
    ``F_{n+1} = S_beta[F_n]``, ``F'_{n+1} = (S_beta)^2[F'_n]``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    sb = S(beta)
    step = square(sb) if primed else sb
    fam = S(alpha)
    for _ in range(n):
        fam = Compose(step, fam)
    return fam


def make_G(beta, n: int, primed: bool = False) -> Family:
    """``G_1 = S_beta`` (``G'_1 = (S_beta)^2``) and ``G_{n+1} = step[G_n]``."""
    if n < 1:
        raise DomainError("G_n is defined for n >= 1")
    sb = S(beta)
    step = square(sb) if primed else sb
    fam = step
    for _ in range(n - 1):
        fam = Compose(step, fam)
    return fam


# -- membership ------------------------------------------------------------------

def member(M: Family, F: Sequence[int]) -> bool:
    """Decide ``F in M``."""
    return _member(M, tuple(F))


@lru_cache(maxsize=1 << 20)
def _member(M, F):
    if isinstance(M, Schreier):
        return _schreier_member(M, F)
    if isinstance(M, CardCap):
        return len(F) <= M.k
    if isinstance(M, Compose):
        return _compose_member(M.outer, M.inner, F)
    if isinstance(M, Pair):
        return any(_member(M.first, F[:t]) and _member(M.second, F[t:])
                   for t in range(len(F) + 1))
    if isinstance(M, EmptyOnly):
        return not F
    if isinstance(M, Void):
        return False
    if isinstance(M, Deriv):
        if M.order.is_finite:
            return _deriv_member(M.base, F, int(M.order))
        simple = derivative_simplify(M)
        if _has_infinite_deriv(simple):
            raise UnsupportedFamily(f"cannot reduce {format_family(M)} to finite derivatives")
        return _member(simple, F)
    raise TypeError(f"not a family expression: {M!r}")


def _schreier_member(M, F):
    a = M.alpha
    if not F:
        return True
    if not a:
        return len(F) <= 1
    if a == ONE:
        return len(F) <= F[0]
    if a.is_successor:
        return _compose_member(_S1, Schreier(a.predecessor(), M.rule, M.fseq), F)
    bound = len(F) if M.rule == "card" else F[0]
    return any(_member(Schreier(M.fseq(a, n), M.rule, M.fseq), F)
               for n in range(1, bound + 1))


def _compose_member(outer, inner, F):
    if not F:
        return _member(outer, ())
    m = len(F)

    def search(i, mins):
        if i == m:
            return True
        mins = mins + (F[i],)
        if not _member(outer, mins):
            return False
        for j in range(m, i, -1):
            if _member(inner, F[i:j]) and search(j, mins):
                return True
        return False

    return search(0, ())


def derivative_member(M: Family, F: Sequence[int], k: int) -> bool:
    """Decide ``F in M^(k)`` for finite ``k``.

    One derivative step uses the witness rule for regular families:
    ``G in M'`` iff ``G u {n} in M`` for some ``n > max G``.  Spreading makes
    membership monotone in ``n``, so one large witness decides the step.  The
    witness is taken beyond ``|G| + k``: no count-versus-minimum constraint
    can then bind on the added elements, which is what the small probes
    ``max G + 1`` and ``max G + 2`` miss (``{} in S_1^(3)`` needs ``n >= 3``).
    """
    if k < 0:
        raise DomainError("derivative order must be non-negative")
    return _deriv_member(M, tuple(F), k)


@lru_cache(maxsize=1 << 20)
def _deriv_member(M, F, k):
    if k == 0:
        return _member(M, F)
    w = max(F[-1] if F else 0, len(F) + k) + 1
    return _deriv_member(M, F + (w,), k - 1)


def is_admissible(M: Family, blocks: Sequence[Sequence[int]]) -> bool:
    """True iff ``blocks`` are successive and their minima form a member of ``M``."""
    blocks = [finset(b) for b in blocks]
    if any(not b for b in blocks):
        raise DomainError("admissible sequences consist of nonempty blocks")
    for b0, b1 in zip(blocks, blocks[1:]):
        if b0[-1] >= b1[0]:
            return False
    return member(M, tuple(b[0] for b in blocks))


def enumerate_members(M: Family, ground: int, cap: int = ENUMERATION_CAP) -> set:
    """All members of ``M`` contained in ``{1, ..., ground}``, including the empty set."""
    if ground > cap:
        raise BudgetError(f"enumeration over [1..{ground}] exceeds cap {cap}")
    pts = range(1, ground + 1)
    return {F for r in range(ground + 1) for F in itertools.combinations(pts, r)
            if _member(M, F)}


def standard_representation(M: Family, N: Family, F: Sequence[int]) -> list:
    """Greedy decomposition of ``F in M[N]`` into maximal ``N``-prefixes."""
    F = tuple(F)
    if not F:
        raise DomainError("the standard representation is defined for nonempty sets")
    if not _member(Compose(M, N), F):
        raise DomainError(f"{F} is not a member of {format_family(Compose(M, N))}")
    blocks = []
    rest = F
    while rest:
        k = max((j for j in range(1, len(rest) + 1) if _member(N, rest[:j])), default=0)
        if not k:
            raise DomainError(f"no nonempty prefix of {rest} lies in {format_family(N)}")
        blocks.append(rest[:k])
        rest = rest[k:]
    return blocks


def spread_dominates(F: Sequence[int], G: Sequence[int]) -> bool:
    """True iff ``G`` is contained in a spread of ``F``.

    Matching ``G``'s ``j``-th element against ``F``'s ``j``-th element is
    optimal, so the greedy left-to-right test is exact.
    """
    return len(G) <= len(F) and all(f <= g for f, g in zip(F, G))


def spread_onto(M: Family, subsequence) -> Callable[[Sequence[int]], bool]:
    """Membership predicate for ``M(L) = {{l_i : i in F} : F in M}``.

    ``subsequence`` is a strictly increasing sequence ``(l_1, l_2, ...)`` or a
    callable ``i -> l_i`` (1-based).
    """
    if callable(subsequence):
        term = subsequence
    else:
        seq = tuple(subsequence)
        if any(a >= b for a, b in zip(seq, seq[1:])):
            raise DomainError("subsequence must be strictly increasing")
        term = lambda i: seq[i - 1] if i <= len(seq) else None

    def predicate(G):
        pre = []
        i = 1
        for g in G:
            while True:
                v = term(i)
                if v is None or v > g:
                    return False
                i += 1
                if v == g:
                    pre.append(i - 1)
                    break
        return member(M, pre)

    return predicate


# -- derivatives and index -----------------------------------------------------------

def _has_infinite_deriv(M) -> bool:
    if isinstance(M, Deriv):
        return not M.order.is_finite or _has_infinite_deriv(M.base)
    if isinstance(M, Compose):
        return _has_infinite_deriv(M.outer) or _has_infinite_deriv(M.inner)
    if isinstance(M, Pair):
        return _has_infinite_deriv(M.first) or _has_infinite_deriv(M.second)
    return False


def _has_deriv(M) -> bool:
    if isinstance(M, Deriv):
        return True
    if isinstance(M, Compose):
        return _has_deriv(M.outer) or _has_deriv(M.inner)
    if isinstance(M, Pair):
        return _has_deriv(M.first) or _has_deriv(M.second)
    return False


def derivative_simplify(M: Family) -> Family:
    """Rewrite derivative nodes with the known calculus.

    Rules: ``(M[N])^(i*b) = (M^(b))[N]`` where ``i`` is the index of ``N``;
    ``A(k)^(j) = A(k-j)``; ``S_g^(w^g) = {{}}``; a derivative of order equal
    to (beyond) the index is ``{{}}`` (empty).  Nodes the rules cannot reach
    are returned as they are.
    """
    if isinstance(M, Compose):
        return Compose(derivative_simplify(M.outer), derivative_simplify(M.inner))
    if isinstance(M, Pair):
        return Pair(derivative_simplify(M.first), derivative_simplify(M.second))
    if isinstance(M, Deriv):
        return _simplify_deriv(derivative_simplify(M.base), M.order)
    return M


def _simplify_deriv(base, xi):
    if not xi:
        return base
    if isinstance(base, Deriv):
        return _simplify_deriv(base.base, add(base.order, xi))
    if isinstance(base, (Void, EmptyOnly)):
        return Void()
    if isinstance(base, CardCap):
        if xi.is_finite and int(xi) <= base.k:
            return CardCap(base.k - int(xi))
        return Void()
    try:
        iota = index(base)
    except UnsupportedFamily:
        iota = None
    if iota is not None:
        if xi == iota:
            return EmptyOnly()
        if xi > iota:
            return Void()
    if isinstance(base, Schreier) and base.alpha.is_successor and base.alpha > ONE:
        inner = Schreier(base.alpha.predecessor(), base.rule, base.fseq)
        out = _compose_rule(Schreier(ONE, base.rule, base.fseq), inner, xi)
        if out is not None:
            return out
    if isinstance(base, Compose):
        out = _compose_rule(base.outer, base.inner, xi)
        if out is not None:
            return out
    return Deriv(base, xi)


def _compose_rule(M, N, xi):
    try:
        a = index(N)
    except UnsupportedFamily:
        return None
    if not a:
        return None
    q, r = left_divmod(xi, a)
    if r:
        return None
    return Compose(_simplify_deriv(M, q), N)


def index(M: Family) -> Ordinal:
    """The Cantor-Bendixson index ``iota(M)``: least ``x`` with ``M^(x) = {{}}``.

    ``iota(S_g) = w^g``, ``iota(A(k)) = k``, ``iota(M[N]) = iota(N)*iota(M)``,
    ``iota((M, N)) = iota(N) + iota(M)``.  The last two are derived rules
    (the composition law follows from the derivative calculus).
    """
    if isinstance(M, Schreier):
        return omega_pow(M.alpha)
    if isinstance(M, CardCap):
        return Ordinal.from_int(M.k)
    if isinstance(M, EmptyOnly):
        return ZERO
    if isinstance(M, Compose):
        return mul(index(M.inner), index(M.outer))
    if isinstance(M, Pair):
        return add(index(M.second), index(M.first))
    if isinstance(M, Deriv):
        simple = derivative_simplify(M)
        if isinstance(simple, Deriv):
            base = index(simple.base)
            if simple.order > base:
                raise UnsupportedFamily("derivative beyond the index is the empty family")
            return left_sub(base, simple.order)
        return index(simple)
    if isinstance(M, Void):
        raise UnsupportedFamily("the empty family has no index")
    raise TypeError(f"not a family expression: {M!r}")


# -- regularity -----------------------------------------------------------------

@dataclass
class RegularityReport:
    ground: int
    members: int
    missing_basics: list
    hereditary_violations: list
    spreading_violations: list

    @property
    def ok(self) -> bool:
        return not (self.missing_basics or self.hereditary_violations
                    or self.spreading_violations)


def regularity_check(M: Family, ground: int, cap: int = ENUMERATION_CAP) -> RegularityReport:
    """Check hereditariness and spreading of ``M`` inside ``[1..ground]``.

    Closure under single deletions and single unit right-shifts implies
    closure under all subsets and all spreads within the ground set.
    """
    members = enumerate_members(M, ground, cap)
    if isinstance(M, Void) or _has_deriv(M):
        # a derivative drops the singletons that cannot be extended far enough
        basics = []
    elif isinstance(M, EmptyOnly) or isinstance(M, CardCap) and M.k == 0:
        basics = [()]
    else:
        basics = [()] + [(k,) for k in range(1, ground + 1)]
    missing = [F for F in basics if F not in members]
    her, spr = [], []
    for F in sorted(members):
        for i in range(len(F)):
            G = F[:i] + F[i + 1:]
            if G not in members:
                her.append((F, G))
            nxt = F[i + 1] if i + 1 < len(F) else ground + 1
            if F[i] + 1 < nxt:
                G = F[:i] + (F[i] + 1,) + F[i + 1:]
                if G not in members:
                    spr.append((F, G))
    return RegularityReport(ground, len(members), missing, her, spr)


def clear_caches():
    _member.cache_clear()
    _deriv_member.cache_clear()


# -- text -------------------------------------------------------------------------

class FamilySyntaxError(ValueError):
    pass


def format_family(M: Family) -> str:
    if isinstance(M, Schreier):
        suffix = ",min" if M.rule == "min" else ""
        return f"S({format_ordinal(M.alpha)}{suffix})"
    if isinstance(M, CardCap):
        return f"A({M.k})"
    if isinstance(M, EmptyOnly):
        return "E"
    if isinstance(M, Void):
        return "V"
    if isinstance(M, Compose):
        return f"{format_family(M.outer)}[{format_family(M.inner)}]"
    if isinstance(M, Pair):
        if M.first == M.second:
            return f"{format_family(M.first)}^2"
        return f"({format_family(M.first)},{format_family(M.second)})"
    if isinstance(M, Deriv):
        return f"D({format_family(M.base)},{format_ordinal(M.order)})"
    raise TypeError(f"not a family expression: {M!r}")


def parse_family(text: str) -> Family:
    """Parse the family mini-language.

    ``S(ord)`` Schreier (``S(ord,min)`` for the min-rule variant), ``A(k)``
    cardinality cap, ``M[N]`` composition, ``(M,N)`` pair, ``M^2``,
    ``D(M,ord)`` derivative, ``E`` for ``{{}}`` and ``V`` for the empty family.
    """
    s = "".join(text.split())
    pos = 0

    def error(msg):
        raise FamilySyntaxError(f"{msg} at position {pos} in {text!r}")

    def expect(ch):
        nonlocal pos
        if s[pos:pos + 1] != ch:
            error(f"expected {ch!r}")
        pos += 1

    def ordinal_until(stops):
        nonlocal pos
        depth, start = 0, pos
        while pos < len(s):
            c = s[pos]
            if c == "(":
                depth += 1
            elif c == ")" and depth:
                depth -= 1
            elif depth == 0 and c in stops:
                break
            pos += 1
        try:
            return parse_ordinal(s[start:pos])
        except OrdinalSyntaxError as exc:
            error(f"bad ordinal ({exc})")

    def primary():
        nonlocal pos
        c = s[pos:pos + 1]
        if c == "S":
            pos += 1
            expect("(")
            alpha = ordinal_until(",)")
            rule = "card"
            if s[pos:pos + 1] == ",":
                pos += 1
                for name in ("min", "card"):
                    if s.startswith(name, pos):
                        rule = name
                        pos += len(name)
                        break
                else:
                    error("expected limit rule 'min' or 'card'")
            expect(")")
            return Schreier(alpha, rule)
        if c == "A":
            pos += 1
            expect("(")
            start = pos
            while s[pos:pos + 1].isdigit():
                pos += 1
            if start == pos:
                error("expected a cardinality")
            k = int(s[start:pos])
            expect(")")
            return CardCap(k)
        if c == "E":
            pos += 1
            return EmptyOnly()
        if c == "V":
            pos += 1
            return Void()
        if c == "D":
            pos += 1
            expect("(")
            base = expr()
            expect(",")
            order = ordinal_until(")")
            expect(")")
            return Deriv(base, order)
        if c == "(":
            pos += 1
            first = expr()
            if s[pos:pos + 1] == ",":
                pos += 1
                second = expr()
                expect(")")
                return Pair(first, second)
            expect(")")
            return first
        error("expected a family expression")

    def expr():
        nonlocal pos
        node = primary()
        while pos < len(s):
            if s[pos] == "[":
                pos += 1
                inner = expr()
                expect("]")
                node = Compose(node, inner)
            elif s.startswith("^2", pos):
                pos += 2
                node = Pair(node, node)
            else:
                break
        return node

    out = expr()
    if pos != len(s):
        error("unexpected trailing input")
    return out


def parse_finset(text: str) -> FinSet:
    """Parse ``"2,3,5"`` (also ``""`` or ``"{}"`` for the empty set)."""
    body = text.strip().strip("{}").strip()
    if not body:
        return ()
    values = [int(v) for v in body.split(",")]
    out = finset(values)
    if len(out) != len(values):
        raise DomainError(f"repeated elements in {text!r}")
    return out


def format_finset(F: Sequence[int]) -> str:
    return ",".join(str(v) for v in F)


_S1 = Schreier(ONE)
