"""Countable ordinals below epsilon_0 in hereditary Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)``
terms with strictly decreasing exponents; exponents are themselves
ordinals.  The text grammar uses ``w`` for omega::

    expr := term ('+' term)*
    term := 'w' '^' atom ('*' nat)? | 'w' ('*' nat)? | nat
    atom := nat | 'w' | '(' expr ')'

>>> parse_ordinal("1+w")
Ordinal('w')
>>> format_ordinal(parse_ordinal("w^2*2") * parse_ordinal("w*3"))
'w^3*3'
"""
from __future__ import annotations

from functools import lru_cache, total_ordering
from typing import Callable, NamedTuple, Union

__all__ = [
    "Ordinal", "OrdinalSyntaxError", "OrdinalDomainError",
    "ZERO", "ONE", "OMEGA",
    "as_ordinal", "parse_ordinal", "format_ordinal",
    "compare", "add", "mul", "omega_pow", "fund_seq", "FundamentalSequence",
    "left_sub", "left_divmod", "corollary_params", "CorollaryParams",
]

OrdinalLike = Union["Ordinal", int, str]


class OrdinalSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class OrdinalDomainError(ValueError):
    """Raised when an ordinal operation is applied outside its domain."""


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms=()):
        terms = tuple((as_ordinal(e), int(c)) for e, c in terms)
        for i, (e, c) in enumerate(terms):
            if c < 1:
                raise ValueError("coefficients must be positive")
            if i and not _cmp(terms[i - 1][0], e) > 0:
                raise ValueError("exponents must be strictly decreasing")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", hash(terms))

    @classmethod
    def _raw(cls, terms):
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", hash(terms))
        return obj

    @classmethod
    def from_int(cls, n: int) -> Ordinal:
        if n < 0:
            raise OrdinalDomainError("ordinals are non-negative")
        return cls._raw(((ZERO, n),)) if n else ZERO

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    def __reduce__(self):
        return (Ordinal, (self.terms,))

    # -- structure -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, int):
            other = Ordinal.from_int(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return _cmp(self, other) < 0

    def __add__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else add(self, other)

    def __radd__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else add(other, self)

    def __mul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else mul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else mul(other, self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0])

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and bool(self.terms[-1][0])

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0]

    def __int__(self):
        if not self.is_finite:
            raise OrdinalDomainError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def leading_exponent(self) -> Ordinal:
        if not self.terms:
            raise OrdinalDomainError("0 has no leading exponent")
        return self.terms[0][0]

    def predecessor(self) -> Ordinal:
        if not self.is_successor:
            raise OrdinalDomainError(f"{self} is not a successor ordinal")
        *head, (e, c) = self.terms
        return Ordinal._raw(tuple(head) + (((e, c - 1),) if c > 1 else ()))


def _cmp(a: Ordinal, b: Ordinal) -> int:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        if ea is not eb:
            c = _cmp(ea, eb)
            if c:
                return c
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def _coerce(x):
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool) and x >= 0:
        return Ordinal.from_int(x)
    return None


ZERO = Ordinal._raw(())
ONE = Ordinal._raw(((ZERO, 1),))
OMEGA = Ordinal._raw(((ONE, 1),))


def as_ordinal(x: OrdinalLike) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, str):
        return parse_ordinal(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return Ordinal.from_int(x)
    raise TypeError(f"cannot interpret {x!r} as an ordinal")


# -- arithmetic -----------------------------------------------------------

def compare(a: Ordinal, b: Ordinal) -> str:
    """Return ``"LT"``, ``"EQ"`` or ``"GT"``."""
    c = _cmp(as_ordinal(a), as_ordinal(b))
    return "LT" if c < 0 else "GT" if c > 0 else "EQ"


@lru_cache(maxsize=1 << 16)
def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    e, c = b.terms[0]
    kept = []
    for ea, ca in a.terms:
        k = _cmp(ea, e)
        if k > 0:
            kept.append((ea, ca))
        elif k == 0:
            c += ca
            break
        else:
            break
    return Ordinal._raw(tuple(kept) + ((e, c),) + b.terms[1:])


@lru_cache(maxsize=1 << 16)
def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if not a.terms or not b.terms:
        return ZERO
    lead_e, lead_c = a.terms[0]
    out = ZERO
    for e, c in b.terms:
        if e.terms:
            piece = Ordinal._raw(((add(lead_e, e), c),))
        else:
            piece = Ordinal._raw(((lead_e, lead_c * c),) + a.terms[1:])
        out = add(out, piece)
    return out


def omega_pow(a: OrdinalLike) -> Ordinal:
    """omega raised to ``a``."""
    return Ordinal._raw(((as_ordinal(a), 1),))


def left_sub(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique ``d`` with ``b + d == a``; requires ``b <= a``."""
    if _cmp(b, a) > 0:
        raise OrdinalDomainError(f"{b} > {a}")
    for i, ((ea, ca), tb) in enumerate(zip(a.terms, b.terms + ((None, 0),))):
        eb, cb = tb
        if eb is not None and ea == eb and ca == cb:
            continue
        if eb is not None and ea == eb:
            return Ordinal._raw(((ea, ca - cb),) + a.terms[i + 1:])
        return Ordinal._raw(a.terms[i:])
    return ZERO


def left_divmod(a: Ordinal, d: Ordinal) -> tuple[Ordinal, Ordinal]:
    """Return ``(q, r)`` with ``a == d*q + r`` and ``r < d``."""
    if not d.terms:
        raise ZeroDivisionError("ordinal division by zero")
    e, c = d.terms[0]
    q_terms = []
    for i, (x, n) in enumerate(a.terms):
        k = _cmp(x, e)
        if k > 0:
            q_terms.append((left_sub(x, e), n))
            continue
        if k == 0:
            qf = n // c
            if qf and qf * c == n and _cmp(Ordinal._raw(d.terms[1:]), Ordinal._raw(a.terms[i + 1:])) > 0:
                qf -= 1
            if qf:
                q_terms.append((ZERO, qf))
        break
    q = Ordinal._raw(tuple(q_terms))
    r = left_sub(a, mul(d, q))
    assert _cmp(r, d) < 0
    return q, r


# -- fundamental sequences -------------------------------------------------

FundamentalSequence = Callable[[Ordinal, int], Ordinal]


def fund_seq(a: OrdinalLike, n: int) -> Ordinal:
    """The ``n``-th term (``n >= 1``) of the standard fundamental sequence.

    ``(d + w^(b+1))[n] = d + w^b * n`` and ``(d + w^b)[n] = d + w^(b[n])``
    for limit ``b``.
    """
    a = as_ordinal(a)
    if n < 1:
        raise OrdinalDomainError("fundamental sequences are indexed from 1")
    if not a.is_limit:
        raise OrdinalDomainError(f"{a} is not a limit ordinal")
    *head, (b, c) = a.terms
    delta = Ordinal._raw(tuple(head) + (((b, c - 1),) if c > 1 else ()))
    if b.is_successor:
        return add(delta, Ordinal._raw(((b.predecessor(), n),)))
    return add(delta, omega_pow(fund_seq(b, n)))


# -- final corollary ---------------------------------------------------------

class CorollaryParams(NamedTuple):
    gamma: Ordinal
    eta: Ordinal | None
    schreier_case: bool


def corollary_params(a: OrdinalLike) -> CorollaryParams:
    """Split ``a`` as ``gamma + eta*w`` (or flag the Schreier-space case).

    With CNF ``w^a1*m1 + ... + w^ak*mk``: if ``ak == 0`` the space is the
    Schreier space of order ``a - 1``; if ``ak`` is a successor,
    ``gamma = w^a1*m1 + ... + w^ak*(mk-1)`` and ``eta = w^(ak-1)``.
    """
    a = as_ordinal(a)
    if not a.terms:
        raise OrdinalDomainError("corollary_params needs a >= 1")
    *head, (ak, mk) = a.terms
    if not ak.terms:
        return CorollaryParams(a.predecessor(), None, True)
    if ak.is_limit:
        raise OrdinalDomainError(f"last CNF exponent {ak} of {a} is a limit ordinal")
    gamma = Ordinal._raw(tuple(head) + (((ak, mk - 1),) if mk > 1 else ()))
    return CorollaryParams(gamma, omega_pow(ak.predecessor()), False)


# -- text ----------------------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    a = as_ordinal(a)
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if not e.terms:
            parts.append(str(c))
            continue
        if e == ONE:
            s = "w"
        elif e.is_finite or e == OMEGA:
            s = f"w^{format_ordinal(e)}"
        else:
            s = f"w^({format_ordinal(e)})"
        parts.append(s if c == 1 else f"{s}*{c}")
    return "+".join(parts)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.s = text.replace("ω", "w")
        self.pos = 0

    def error(self, msg):
        raise OrdinalSyntaxError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.s) and self.s[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.s[self.pos] if self.pos < len(self.s) else ""

    def eat(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def nat(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.s) and self.s[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.s[start:self.pos])

    def expr(self):
        value = self.term()
        while self.peek() == "+":
            self.pos += 1
            value = add(value, self.term())
        return value

    def term(self):
        ch = self.peek()
        if ch.isdigit():
            return Ordinal.from_int(self.nat())
        if ch != "w":
            self.error("expected a term")
        self.pos += 1
        exponent = ONE
        if self.peek() == "^":
            self.pos += 1
            exponent = self.atom()
        value = omega_pow(exponent)
        if self.peek() == "*":
            self.pos += 1
            value = mul(value, Ordinal.from_int(self.nat()))
        return value

    def atom(self):
        ch = self.peek()
        if ch.isdigit():
            return Ordinal.from_int(self.nat())
        if ch == "w":
            self.pos += 1
            return OMEGA
        if ch == "(":
            self.pos += 1
            value = self.expr()
            self.eat(")")
            return value
        self.error("expected an exponent")


def parse_ordinal(text: str) -> Ordinal:
    p = _Parser(text)
    value = p.expr()
    if p.peek():
        p.error("unexpected trailing input")
    return value
