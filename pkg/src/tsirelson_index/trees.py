"""Finite block trees, their orders, and l1-K branch certification."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetError, DomainError
from .families import ENUMERATION_CAP, enumerate_members, make_F, member, spread_dominates
from .tsnorm import (
    NormCache, NormParams, SparseVector, format_vector, normalize, parse_vector,
    tsirelson_norm, unit,
)

__all__ = [
    "BlockTree", "L1Verdict", "derived_tree", "tree_order", "min_set_family",
    "g_family_member", "g_family_index", "l1_check_branch", "build_Fn_tree",
    "dump_tree", "load_tree",
]


class BlockTree:
    """A finite, prefix-closed set of block bases.

    Nodes are tuples ``(x_1, ..., x_n)`` of nonzero :class:`SparseVector`
    with ``supp x_i < supp x_{i+1}``.
    """
    __slots__ = ("nodes",)

    def __init__(self, nodes: Iterable[Sequence[SparseVector]] = ()):
        nodes = frozenset(tuple(n) for n in nodes)
        for node in nodes:
            if not node:
                raise DomainError("tree nodes are nonempty sequences")
            for x in node:
                if not x:
                    raise DomainError("tree nodes consist of nonzero vectors")
            for a, b in zip(node, node[1:]):
                if a.support[-1] >= b.support[0]:
                    raise DomainError(f"node is not a block basis: {_fmt_node(node)}")
            if len(node) > 1 and node[:-1] not in nodes:
                raise DomainError(f"tree is not prefix closed at {_fmt_node(node)}")
        object.__setattr__(self, "nodes", nodes)

    def __setattr__(self, name, value):
        raise AttributeError("BlockTree is immutable")

    def __len__(self):
        return len(self.nodes)

    def __bool__(self):
        return bool(self.nodes)

    def __contains__(self, node):
        return tuple(node) in self.nodes

    def __eq__(self, other):
        return isinstance(other, BlockTree) and self.nodes == other.nodes

    def __hash__(self):
        return hash(self.nodes)

    def roots(self) -> list:
        return sorted({n[0] for n in self.nodes}, key=lambda v: v.items)

    def subtree(self, x: SparseVector) -> BlockTree:
        """``T_x = {(x_1..x_n) : (x, x_1..x_n) in T}``."""
        return BlockTree(n[1:] for n in self.nodes if len(n) > 1 and n[0] == x)

    def branches(self) -> list:
        """Maximal nodes, sorted for determinism."""
        inner = {n[:-1] for n in self.nodes}
        return sorted((n for n in self.nodes if n not in inner), key=_node_sort_key)


def _node_sort_key(node):
    return tuple(v.items for v in node)


def _fmt_node(node):
    return " ; ".join(format_vector(v) for v in node)


def derived_tree(T: BlockTree) -> BlockTree:
    """``D(T)``: the nodes of ``T`` that have an extension in ``T``."""
    return BlockTree({n[:-1] for n in T.nodes if len(n) > 1})


def tree_order(T: BlockTree) -> int:
    """``o(T) = sup over roots (x) of o(T_x) + 1``; zero for the empty tree."""
    return max((tree_order(T.subtree(x)) + 1 for x in T.roots()), default=0)


def min_set_family(T: BlockTree) -> set:
    """``F(T)``: the sets ``{max supp x_i}`` over all nodes of ``T``."""
    return {tuple(x.support[-1] for x in node) for node in T.nodes}


def g_family_member(FT: Iterable[Sequence[int]], G: Sequence[int]) -> bool:
    """Membership in ``G(T)``, the sets contained in a spread of some ``F in F(T)``."""
    G = tuple(G)
    return not G or any(spread_dominates(F, G) for F in FT)


@dataclass(frozen=True)
class GIndex:
    iterative: int
    closed_form: int

    @property
    def agree(self) -> bool:
        return self.iterative == self.closed_form


def g_family_index(FT: Iterable[Sequence[int]]) -> GIndex:
    """Index of the spread family generated by ``FT``.

    The iterative value applies one-step derivatives with a witness beyond
    every generator element (the family is spreading, so a single large
    witness decides each step) until only the empty set remains.  The closed
    form is the largest generator cardinality.
    """
    FT = [tuple(F) for F in FT]
    closed = max((len(F) for F in FT), default=0)
    top = max((F[-1] for F in FT if F), default=0)

    def in_derivative(G, k):
        if k == 0:
            return g_family_member(FT, G)
        w = max(G[-1] if G else 0, top) + 1
        return in_derivative(G + (w,), k - 1)

    k = 0
    while in_derivative((), k + 1):
        k += 1
    return GIndex(k, closed)


@dataclass
class L1Verdict:
    status: str
    constant: Fraction
    witness: tuple | None = None
    certificate: dict = field(default_factory=dict)
    checks: int = 0


def _branch_value(branch, coeffs, p, cache):
    total = SparseVector()
    for a, x in zip(coeffs, branch):
        total = total + x * a
    return tsirelson_norm(total, p, cache=cache)


def l1_check_branch(branch: Sequence[SparseVector], K, p: NormParams, trials: int = 100,
                    seed=0, *, cache: NormCache | None = None) -> L1Verdict:
    """Test ``K ||sum a_i x_i|| >= sum |a_i|`` on a normalised block basis.

    Returns ``falsified`` with an exact witness when a checked coefficient
    vector violates the bound.  ``certified`` is issued only for unit-vector
    branches ``(e_k)_{k in F}`` with ``F in F_n`` and ``2**n <= K``, where the
    set ``F`` itself witnesses ``rho_n(a) = sum |a_k|`` and the lower estimate
    ``||a|| >= 2**-n rho_n(a)`` applies (the squared norm dominates the plain
    one).  Anything else is ``inconclusive``; sampling alone never certifies.
    """
    K = Fraction(K)
    branch = list(branch)
    cache = cache if cache is not None else NormCache()
    rng = random.Random(seed)
    n = len(branch)
    candidates = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    candidates.append(tuple(Fraction(1) for _ in range(n)))
    for _ in range(trials):
        candidates.append(tuple(Fraction(rng.randint(0, 6), rng.randint(1, 4)) for _ in range(n)))
    checks = 0
    for a in candidates:
        if not any(a):
            continue
        checks += 1
        if K * _branch_value(branch, a, p, cache) < sum(a):
            return L1Verdict("falsified", K, witness=a, checks=checks)
    cert = _unit_certificate(branch, K, p)
    if cert is not None:
        return L1Verdict("certified", K, certificate=cert, checks=checks)
    return L1Verdict("inconclusive", K, checks=checks)


def _unit_certificate(branch, K, p):
    coords = []
    for x in branch:
        if len(x) != 1 or abs(x.items[0][1]) != 1:
            return None
        coords.append(x.support[0])
    F = tuple(coords)
    level = 0
    while (1 << level) <= K:
        if member(make_F(p.alpha, p.beta, level), F):
            return {"set": F, "n": level, "bound": 1 << level}
        level += 1
    return None


def build_Fn_tree(alpha, beta, n: int, ground: int, cap: int = ENUMERATION_CAP) -> BlockTree:
    """The unit-vector tree over ``F_n`` restricted to ``[1..ground]``.

    Nodes are ``(e_k)_{k in F}`` for nonempty ``F in F_n``; heredity of
    ``F_n`` makes the set of nodes prefix closed.
    """
    if ground > cap:
        raise BudgetError(f"ground {ground} exceeds enumeration cap {cap}")
    members = enumerate_members(make_F(alpha, beta, n), ground, cap)
    return BlockTree(tuple(unit(k) for k in F) for F in members if F)


def dump_tree(T: BlockTree) -> str:
    """One node per line, vectors separated by ``;``, shortest nodes first."""
    nodes = sorted(T.nodes, key=lambda nd: (len(nd), _node_sort_key(nd)))
    return "".join(_fmt_node(nd) + "\n" for nd in nodes)


def load_tree(text: str, normalize_with: NormParams | None = None) -> BlockTree:
    """Parse :func:`dump_tree` output, validating prefix closure.

    Trees in the l1-K sense live on the unit sphere; pass ``normalize_with``
    to rescale every vector to norm one in that space.
    """
    nodes = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            node = tuple(parse_vector(part) for part in line.split(";"))
        except DomainError as exc:
            raise DomainError(f"line {lineno}: {exc}") from exc
        if normalize_with is not None:
            node = tuple(normalize(v, normalize_with) for v in node)
        nodes.append(node)
    return BlockTree(nodes)
