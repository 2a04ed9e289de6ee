"""Exact Tsirelson-type norms on finitely supported rational vectors.

For ordinals ``alpha`` and ``beta != 0`` the plain norm is the fixed point of

    ||x|| = max(||x||_{S_alpha}, 1/2 sup sum_i ||E_i x||)

over ``S_beta``-admissible block sequences ``E_1 < ... < E_j``; the squared
variant uses ``(S_beta)^2``-admissible sequences instead.

:func:`tsirelson_norm` evaluates the fixed point by memoised recursion over
interval partitions of the support.  :func:`iterate_norm` computes the
level-``n`` approximations directly from their definition and serves as an
independent oracle.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .errors import BudgetError, DomainError
from .families import (
    CardCap, EmptyOnly, Family, Pair, Schreier, Void, _member, S, finset,
)
from .ordinals import ONE, Ordinal, as_ordinal, format_ordinal

__all__ = [
    "SparseVector", "NormParams", "NormCache", "unit",
    "sigma", "family_norm", "tsirelson_norm", "iterate_norm",
    "implicit_check", "admissible_cuts", "normalize",
    "parse_vector", "format_vector", "DP_SUPPORT_CAP", "ORACLE_SUPPORT_CAP",
]

DP_SUPPORT_CAP = 18
ORACLE_SUPPORT_CAP = 10


class SparseVector:
    """A finitely supported vector with exact rational entries.

    Zero entries are never stored; vectors are immutable and hashable.
    """
    __slots__ = ("_items", "_hash")

    def __init__(self, entries: Mapping[int, object] | Sequence[tuple[int, object]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict[int, Fraction] = {}
        for k, v in entries:
            k = int(k)
            if k < 1:
                raise DomainError(f"coordinates are positive integers, got {k}")
            acc[k] = acc.get(k, Fraction(0)) + Fraction(v)
        items = tuple(sorted((k, v) for k, v in acc.items() if v))
        object.__setattr__(self, "_items", items)
        object.__setattr__(self, "_hash", hash(items))

    def __setattr__(self, name, value):
        raise AttributeError("SparseVector is immutable")

    @property
    def items(self) -> tuple:
        return self._items

    @property
    def support(self) -> tuple:
        return tuple(k for k, _ in self._items)

    def __getitem__(self, k):
        for c, v in self._items:
            if c == k:
                return v
        return Fraction(0)

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return bool(self._items)

    def __iter__(self):
        return iter(self._items)

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return SparseVector(self._items + other._items)

    def __sub__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return SparseVector([(k, -v) for k, v in self._items])

    def __mul__(self, scalar):
        s = Fraction(scalar)
        return SparseVector([(k, v * s) for k, v in self._items])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def restrict(self, E) -> SparseVector:
        """The projection ``E x`` onto the coordinates in ``E``."""
        E = set(E)
        return SparseVector([(k, v) for k, v in self._items if k in E])

    def abs(self) -> SparseVector:
        return SparseVector([(k, abs(v)) for k, v in self._items])

    def l1(self) -> Fraction:
        return sum((abs(v) for _, v in self._items), Fraction(0))

    def sup(self) -> Fraction:
        return max((abs(v) for _, v in self._items), default=Fraction(0))

    def __repr__(self):
        return f"SparseVector({format_vector(self)!r})"


def unit(k: int) -> SparseVector:
    """The unit vector ``e_k``."""
    return SparseVector({k: 1})


def parse_vector(text: str) -> SparseVector:
    """Parse ``"3:1,4:1,5:-1/2"``."""
    text = text.strip()
    if not text:
        return SparseVector()
    entries = []
    seen = set()
    for part in text.split(","):
        try:
            k, v = part.split(":")
            k = int(k)
            v = Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad vector entry {part!r}") from exc
        if k in seen:
            raise DomainError(f"coordinate {k} repeated")
        seen.add(k)
        entries.append((k, v))
    return SparseVector(entries)


def format_vector(x: SparseVector) -> str:
    return ",".join(f"{k}:{v}" for k, v in x.items)


@dataclass(frozen=True)
class NormParams:
    alpha: Ordinal
    beta: Ordinal
    variant: str = "plain"

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_ordinal(self.alpha))
        object.__setattr__(self, "beta", as_ordinal(self.beta))
        if not self.beta:
            raise DomainError("beta must be nonzero")
        if self.variant not in ("plain", "squared"):
            raise DomainError(f"variant must be 'plain' or 'squared', not {self.variant!r}")

    @property
    def base_family(self) -> Schreier:
        return S(self.alpha)

    @property
    def admissibility(self) -> Family:
        sb = S(self.beta)
        return Pair(sb, sb) if self.variant == "squared" else sb

    def with_variant(self, variant: str) -> NormParams:
        return NormParams(self.alpha, self.beta, variant)

    def __str__(self):
        return f"(alpha={format_ordinal(self.alpha)}, beta={format_ordinal(self.beta)}, {self.variant})"


class NormCache:
    """Thread-safe cache of norm values shared across evaluations.

    Keys are ``(params, key)`` where ``key`` is the tuple of
    ``(coordinate, |entry|)`` pairs; every norm here depends on ``x`` only
    through those absolute values.
    """

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, k):
        with self._lock:
            v = self._data.get(k)
            if v is None:
                self.misses += 1
            else:
                self.hits += 1
            return v

    def put(self, k, v):
        with self._lock:
            self._data[k] = v

    def __len__(self):
        return len(self._data)

    def stats(self) -> dict:
        return {"entries": len(self._data), "hits": self.hits, "misses": self.misses}


def _key(x: SparseVector) -> tuple:
    return tuple((k, abs(v)) for k, v in x.items)


def sigma(F, x: SparseVector) -> Fraction:
    """``sum_{n in F} |x_n|``."""
    F = set(F)
    return sum((abs(v) for k, v in x.items if k in F), Fraction(0))


# -- family norms --------------------------------------------------------------------

def family_norm(M: Family, x: SparseVector) -> Fraction:
    """``||x||_M = sup_{F in M} sigma_F(x)``, attained on subsets of the support."""
    return _family_norm_key(M, _key(x))


def _family_norm_key(M, key) -> Fraction:
    if not key:
        return Fraction(0)
    if isinstance(M, Schreier) and not M.alpha:
        return max(v for _, v in key)
    if isinstance(M, Schreier) and M.alpha == ONE:
        best = Fraction(0)
        for i, (c, v) in enumerate(key):
            rest = sorted((w for _, w in key[i + 1:]), reverse=True)[:c - 1]
            best = max(best, v + sum(rest))
        return best
    if isinstance(M, CardCap):
        return sum(sorted((v for _, v in key), reverse=True)[:M.k], Fraction(0))
    if isinstance(M, (EmptyOnly, Void)):
        return Fraction(0)
    return _family_norm_search(M, key)


def _family_norm_search(M, key) -> Fraction:
    # depth-first over members of M inside the support; hereditary pruning
    coords = [c for c, _ in key]
    vals = [v for _, v in key]
    best = Fraction(0)

    def dfs(start, chosen, acc):
        nonlocal best
        if acc > best:
            best = acc
        for i in range(start, len(coords)):
            nxt = chosen + (coords[i],)
            if _member(M, nxt):
                dfs(i + 1, nxt, acc + vals[i])

    dfs(0, (), Fraction(0))
    return best


def _family_norm_brute(M, key) -> Fraction:
    # every subset of the support, no structural assumptions
    best = Fraction(0)
    for r in range(len(key) + 1):
        for sub in itertools.combinations(key, r):
            if _member(M, tuple(c for c, _ in sub)):
                best = max(best, sum((v for _, v in sub), Fraction(0)))
    return best


# -- fixed-point norm (interval DP) -----------------------------------------------------

def tsirelson_norm(x: SparseVector, p: NormParams, *, max_support: int = DP_SUPPORT_CAP,
                   cache: NormCache | None = None) -> Fraction:
    """The exact norm ``||x||`` in the plain or squared Tsirelson-type space.

    Blocks of an admissible sequence may be taken to be intervals of the
    support starting at support points: moving a block's minimum right keeps
    admissibility (spreading) and widening a block never lowers its norm
    (1-unconditionality).  The single block equal to the whole region is
    skipped since it contributes half the value being computed.
    """
    key = _key(x)
    if len(key) > max_support:
        raise BudgetError(f"support size {len(key)} exceeds DP cap {max_support}")
    return _DP(p, cache).norm(key)


class _DP:
    def __init__(self, p: NormParams, cache: NormCache | None):
        self.p = p
        self.base = p.base_family
        self.adm = p.admissibility
        self.cache = cache
        self.memo: dict = {}

    def norm(self, key) -> Fraction:
        if not key:
            return Fraction(0)
        v = self.memo.get(key)
        if v is not None:
            return v
        if self.cache is not None:
            v = self.cache.get((self.p, key))
            if v is not None:
                self.memo[key] = v
                return v
        v = key[0][1] if len(key) == 1 else self._solve(key)
        self.memo[key] = v
        if self.cache is not None:
            self.cache.put((self.p, key), v)
        return v

    def _solve(self, key) -> Fraction:
        m = len(key)
        coords = [c for c, _ in key]
        tail = [Fraction(0)] * (m + 1)
        for i in range(m - 1, -1, -1):
            tail[i] = tail[i + 1] + key[i][1]
        base = _family_norm_key(self.base, key)
        if base == tail[0]:
            return base
        target = 2 * base  # best block sum seen so far, doubled value
        adm, norm = self.adm, self.norm

        def dfs(c, mins, acc):
            nonlocal target
            if acc + tail[c] <= target:
                return
            if c:  # c == 0 only for the whole-region single block
                total = acc + norm(key[c:])
                if total > target:
                    target = total
            for c2 in range(c + 1, m):
                nxt = mins + (coords[c2],)
                if _member(adm, nxt):
                    dfs(c2, nxt, acc + norm(key[c:c2]))

        for c0 in range(m):
            if tail[c0] <= target:
                break
            if _member(adm, (coords[c0],)):
                dfs(c0, (coords[c0],), Fraction(0))
        return target / 2


# -- level iterates (oracle) ---------------------------------------------------------------

def iterate_norm(x: SparseVector, p: NormParams, n: int, *,
                 max_support: int = ORACLE_SUPPORT_CAP, cache: dict | None = None) -> Fraction:
    """``||x||_n`` (plain) or ``||x||'_n`` (squared) straight from the recursion.

    ``||x||_0 = ||x||_{S_alpha}`` and ``||x||_{k+1}`` is the larger of
    ``||x||_k`` and half the best ``sum_i ||E_i x||_k`` over admissible
    sequences.  Every admissible sequence of blocks inside the support is
    considered: the set of block minima ranges over all subsets of the
    support and each block takes the best subset of the points between its
    minimum and the next one.  Nothing here relies on the interval reduction
    used by :func:`tsirelson_norm`.

    Arithmetic is on integers: entries are scaled by ``D * 2**L`` with ``D``
    the common denominator and ``L >= n``, which makes every level-``k``
    value (``k <= L``) integral.  ``cache`` (a dict) may be shared between
    calls.
    """
    if n < 0:
        raise DomainError("iteration level must be non-negative")
    if len(x) > max_support:
        raise BudgetError(f"support size {len(x)} exceeds oracle cap {max_support}")
    if not x:
        return Fraction(0)
    denom = 1
    for _, v in x.items:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    scale = denom << max(n, ORACLE_SUPPORT_CAP)
    key = tuple((k, int(abs(v) * scale)) for k, v in x.items)
    memo = {} if cache is None else cache.setdefault((p, scale), {})
    return Fraction(_Oracle(p, memo).level(key, n), scale)


class _Oracle:
    def __init__(self, p: NormParams, memo: dict):
        self.base = p.base_family
        self.adm = p.admissibility
        self.memo = memo

    def level(self, key, n) -> int:
        if not key:
            return 0
        v = self.memo.get((key, n))
        if v is not None:
            return v
        if n == 0:
            v = self._base(key)
        else:
            v = max(self.level(key, n - 1), self._best_sum(key, n - 1) // 2)
        self.memo[(key, n)] = v
        return v

    def _base(self, key) -> int:
        best = 0
        for r in range(1, len(key) + 1):
            for sub in itertools.combinations(key, r):
                if _member(self.base, tuple(c for c, _ in sub)):
                    best = max(best, sum(v for _, v in sub))
        return best

    def _best_sum(self, key, n) -> int:
        m = len(key)
        blocks: dict = {}

        def block_best(i, j):
            # best ||E x||_n over E = {point i} u (any subset of points strictly between i and j)
            b = blocks.get((i, j))
            if b is None:
                inner = key[i + 1:j]
                b = 0
                for r in range(len(inner) + 1):
                    for sub in itertools.combinations(inner, r):
                        b = max(b, self.level((key[i],) + sub, n))
                blocks[(i, j)] = b
            return b

        best = 0
        for cuts in _admissible_index_sets(self.adm, tuple(c for c, _ in key)):
            ends = cuts[1:] + (m,)
            best = max(best, sum(block_best(i, j) for i, j in zip(cuts, ends)))
        assert best % 2 == 0
        return best


@lru_cache(maxsize=1 << 14)
def _admissible_index_sets(M, coords) -> tuple:
    # every nonempty subset of positions whose coordinates form a member of M
    return tuple(cuts for r in range(1, len(coords) + 1)
                 for cuts in itertools.combinations(range(len(coords)), r)
                 if _member(M, tuple(coords[i] for i in cuts)))


# -- fixed-point check, cuts, normalisation -----------------------------------------------

def admissible_cuts(support: Sequence[int], M: Family) -> Iterator[list]:
    """Interval partitions of suffix regions of ``support`` with admissible minima.

    Yields lists of blocks (FinSets); block ``i`` runs from its left
    endpoint up to just before the next block, the last one to the end of
    the support.  A prefix of the support may be left uncovered.
    """
    pts = finset(support)
    m = len(pts)

    def rec(start, mins, cuts):
        ends = cuts[1:] + [m]
        yield [pts[a:b] for a, b in zip(cuts, ends)]
        for c in range(start + 1, m):
            nxt = mins + (pts[c],)
            if _member(M, nxt):
                yield from rec(c, nxt, cuts + [c])

    for c0 in range(m):
        if _member(M, (pts[c0],)):
            yield from rec(c0, (pts[c0],), [c0])


def implicit_check(x: SparseVector, p: NormParams, *, cache: NormCache | None = None) -> bool:
    """Whether the computed norm satisfies its defining fixed-point equation exactly."""
    lhs = tsirelson_norm(x, p, cache=cache)
    best = Fraction(0)
    for blocks in admissible_cuts(x.support, p.admissibility):
        s = sum((tsirelson_norm(x.restrict(b), p, cache=cache) for b in blocks), Fraction(0))
        best = max(best, s)
    rhs = max(family_norm(p.base_family, x), best / 2)
    return lhs == rhs


def normalize(x: SparseVector, p: NormParams, *, cache: NormCache | None = None) -> SparseVector:
    """``x / ||x||`` exactly."""
    if not x:
        raise DomainError("cannot normalise the zero vector")
    return x / tsirelson_norm(x, p, cache=cache)
