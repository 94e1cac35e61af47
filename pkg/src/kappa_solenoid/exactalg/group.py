"""Exact arithmetic in B_a (finite sums of m_n a^n) and in G_a = B_a x| Z.

An element of B_a keeps two representations: its integer Laurent monomials
(what characters are evaluated on) and, for algebraic a, the canonical
rational coordinates in the basis 1, a, ..., a^(d-1) (what equality and
hashing use).  For transcendental a the monomials after cancellation are
already canonical.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

from ..errors import ContextMismatch
from .poly import IntPolynomial, normalize_poly


@dataclass(frozen=True)
class Algebraic:
    poly: IntPolynomial

    is_algebraic = True

    @classmethod
    def from_coeffs(cls, coeffs) -> "Algebraic":
        return cls(normalize_poly(coeffs))

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __str__(self):
        return str(self.poly)


@dataclass(frozen=True)
class Transcendental:
    is_algebraic = False

    def __str__(self):
        return "transcendental"


Parameter = Union[Algebraic, Transcendental]

_POWER_CACHE: Dict[Tuple[int, ...], Dict[int, Tuple[Fraction, ...]]] = {}


def _times_a(vec, coeffs):
    d = len(coeffs) - 1
    top = vec[-1]
    out = [Fraction(0)] + list(vec[:-1])
    if top:
        qd = coeffs[-1]
        for j in range(d):
            out[j] -= top * Fraction(coeffs[j], qd)
    return tuple(out)


def _div_a(vec, coeffs):
    d = len(coeffs) - 1
    low = vec[0]
    out = list(vec[1:]) + [Fraction(0)]
    if low:
        q0 = coeffs[0]
        for j in range(1, d + 1):
            out[j - 1] -= low * Fraction(coeffs[j], q0)
    return tuple(out)


def power_vector(poly: IntPolynomial, n: int) -> Tuple[Fraction, ...]:
    """Coordinates of a^n in the basis 1, a, ..., a^(d-1)."""
    coeffs = poly.coeffs
    cache = _POWER_CACHE.get(coeffs)
    if cache is None:
        d = poly.degree
        cache = {0: tuple(Fraction(int(i == 0)) for i in range(d))}
        _POWER_CACHE[coeffs] = cache
    if n in cache:
        return cache[n]
    step = 1 if n > 0 else -1
    k = n
    while k not in cache:
        k -= step
    vec = cache[k]
    while k != n:
        vec = _times_a(vec, coeffs) if step > 0 else _div_a(vec, coeffs)
        k += step
        cache[k] = vec
    return vec


def _canonical(param: Parameter, monomials: Iterable[Tuple[int, int]]):
    if not param.is_algebraic:
        return None
    d = param.poly.degree
    acc = [Fraction(0)] * d
    for n, m in monomials:
        for i, c in enumerate(power_vector(param.poly, n)):
            if c:
                acc[i] += m * c
    return tuple(acc)


class BElement:
    """An element of B_a.  Immutable; compare with ``==``."""

    __slots__ = ("param", "monomials", "canonical", "_key")

    def __init__(self, param: Parameter, monomials: Mapping[int, int], canonical=None):
        mono = tuple(sorted((int(n), int(m)) for n, m in monomials.items() if m))
        object.__setattr__(self, "param", param)
        object.__setattr__(self, "monomials", mono)
        if canonical is None:
            canonical = _canonical(param, mono)
        object.__setattr__(self, "canonical", canonical)
        object.__setattr__(self, "_key", canonical if param.is_algebraic else mono)

    def __setattr__(self, name, value):
        raise AttributeError("BElement is immutable")

    @classmethod
    def zero(cls, param: Parameter) -> "BElement":
        return cls(param, {})

    @classmethod
    def monomial(cls, param: Parameter, n: int, m: int = 1) -> "BElement":
        return cls(param, {n: m})

    @property
    def key(self):
        """Hashable canonical form."""
        return self._key

    def _check(self, other: "BElement"):
        if self.param != other.param:
            raise ContextMismatch(f"elements of B_a over {self.param} and {other.param}")

    def __add__(self, other: "BElement") -> "BElement":
        self._check(other)
        merged = dict(self.monomials)
        for n, m in other.monomials:
            merged[n] = merged.get(n, 0) + m
        canon = None
        if self.param.is_algebraic:
            canon = tuple(x + y for x, y in zip(self.canonical, other.canonical))
        return BElement(self.param, merged, canon)

    def __neg__(self) -> "BElement":
        canon = None if self.canonical is None else tuple(-x for x in self.canonical)
        return BElement(self.param, {n: -m for n, m in self.monomials}, canon)

    def __sub__(self, other: "BElement") -> "BElement":
        return self + (-other)

    def shift(self, n: int) -> "BElement":
        """Multiply by a^n."""
        if n == 0:
            return self
        return BElement(self.param, {k + n: m for k, m in self.monomials})

    def is_zero(self) -> bool:
        if self.param.is_algebraic:
            return not any(self.canonical)
        return not self.monomials

    def reduced(self) -> "BElement":
        """Rewrite the monomials from the canonical coordinates when they are integral.

        The canonical coordinates are unchanged, so ``b.reduced() == b`` and
        reduction is idempotent.
        """
        if not self.param.is_algebraic:
            return self
        if all(c.denominator == 1 for c in self.canonical):
            return BElement(
                self.param, {i: int(c) for i, c in enumerate(self.canonical)}, self.canonical
            )
        return self

    def __eq__(self, other):
        if not isinstance(other, BElement):
            return NotImplemented
        self._check(other)
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        terms = " + ".join(f"{m}*a^{n}" for n, m in self.monomials) or "0"
        return f"BElement({terms})"


@dataclass(frozen=True, eq=False)
class GroupElement:
    """(b, l) in G_a with law (b, l)(b', l') = (b + a^l b', l + l')."""

    b: BElement
    l: int

    @property
    def param(self):
        return self.b.param

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.b + other.b.shift(self.l), self.l + other.l)

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.b.shift(-self.l), -self.l)

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        result = identity(self.param)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return self.l == 0 and self.b.is_zero()

    @property
    def key(self):
        return (self.b.key, self.l)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.l == other.l and self.b == other.b

    def __hash__(self):
        return hash((self.b.key, self.l))

    def __repr__(self):
        return f"GroupElement({self.b!r}, {self.l})"


def identity(param: Parameter) -> GroupElement:
    return GroupElement(BElement.zero(param), 0)


def gen_u(param: Parameter) -> GroupElement:
    return GroupElement(BElement.zero(param), 1)


def gen_v(param: Parameter) -> GroupElement:
    return GroupElement(BElement.monomial(param, 0), 0)


def from_word(param: Parameter, word: str) -> GroupElement:
    """Product of generators; ``u``/``v`` and their inverses ``U``/``V``."""
    letters = {
        "u": gen_u(param),
        "v": gen_v(param),
    }
    letters["U"] = letters["u"].inverse()
    letters["V"] = letters["v"].inverse()
    g = identity(param)
    for ch in word:
        g = g * letters[ch]
    return g


def element(param: Parameter, monomials: Mapping[int, int], l: int = 0) -> GroupElement:
    return GroupElement(BElement(param, monomials), l)

