"""Periodic points of the solenoid automorphism, counted and enumerated exactly.

A character chi of B_a is stored by its angles theta_n = arg chi(a^n) / 2 pi.
For algebraic a the angles obey sum_j q_j theta_{n+j} = 0 (mod 1); a point
fixed by the q-th power of the automorphism has q-periodic angles, so the
fixed points of period dividing q are the torus solutions of a q x q
circulant integer system.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from ..errors import GuardExceeded, InvalidParameter
from ..exactalg import Algebraic, IntPolynomial, resultant, smith_normal_form

ENUMERATION_GUARD = 10**6

Angle = Union[Fraction, float]


def _as_poly(q) -> IntPolynomial:
    if isinstance(q, Algebraic):
        return q.poly
    if isinstance(q, IntPolynomial):
        return q
    raise InvalidParameter(f"expected an algebraic parameter, got {q!r}")


def _check_period(q: int):
    if not isinstance(q, int) or q < 1:
        raise InvalidParameter(f"period must be a positive integer, got {q!r}")


def _divisors(n: int) -> List[int]:
    return [e for e in range(1, n + 1) if n % e == 0]


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@dataclass(frozen=True)
class Character:
    """A q-periodic character given by its angles theta_0..theta_{q-1} mod 1."""

    angles: Tuple[Angle, ...]

    def __post_init__(self):
        if not self.angles:
            raise InvalidParameter("a character needs at least one angle")
        object.__setattr__(self, "angles", tuple(t % 1 for t in self.angles))

    @property
    def q(self) -> int:
        return len(self.angles)

    @property
    def exact(self) -> bool:
        return all(isinstance(t, (int, Fraction)) for t in self.angles)

    def angle(self, n: int) -> Angle:
        return self.angles[n % self.q]

    @property
    def least_period(self) -> int:
        for e in _divisors(self.q):
            if all(self.angles[n] == self.angles[n % e] for n in range(self.q)):
                return e
        return self.q  # pragma: no cover

    @property
    def is_least_period(self) -> bool:
        return self.least_period == self.q

    def shift(self, k: int = 1) -> "Character":
        """Image under the k-th power of the dual automorphism: theta_n -> theta_{n+k}."""
        return Character(tuple(self.angle(n + k) for n in range(self.q)))

    def orbit(self) -> List["Character"]:
        return [self.shift(k) for k in range(self.least_period)]


def satisfies_recursion(poly, chi: Character) -> bool:
    """Exact check of sum_j q_j theta_{n+j} = 0 mod 1 for every n."""
    coeffs = _as_poly(poly).coeffs
    for n in range(chi.q):
        s = sum(c * chi.angle(n + j) for j, c in enumerate(coeffs))
        if s % 1 != 0:
            return False
    return True


def fixed_count(poly, q: int) -> int:
    """c_q = |Res(Q_a, x^q - 1)|: characters whose period divides q."""
    _check_period(q)
    poly = _as_poly(poly)
    return abs(resultant(poly.coeffs, (-1,) + (0,) * (q - 1) + (1,)))


def least_period_count(poly, q: int) -> int:
    """Characters of least period exactly q, by Moebius inversion of c_e."""
    _check_period(q)
    return sum(mobius(q // e) * fixed_count(poly, e) for e in _divisors(q))


def circulant_system(poly, q: int) -> List[List[int]]:
    """Row n holds the coefficients of Q_a(x) x^n reduced mod x^q - 1."""
    _check_period(q)
    coeffs = _as_poly(poly).coeffs
    rows = []
    for n in range(q):
        row = [0] * q
        for j, c in enumerate(coeffs):
            row[(n + j) % q] += c
        rows.append(row)
    return rows


def enumerate_characters(poly, q: int, guard: int = ENUMERATION_GUARD) -> List[Character]:
    """All characters fixed by the q-th power of the automorphism, sorted.

    Solves C theta = 0 (mod Z^q) through the Smith form U C V = S: the
    solutions are theta = V phi with phi_i in (1/s_i) Z / Z.
    """
    poly = _as_poly(poly)
    count = fixed_count(poly, q)
    if count > guard:
        raise GuardExceeded(f"c_{q} = {count} exceeds the enumeration guard {guard}; use fixed_count")
    c = circulant_system(poly, q)
    _, s, v = smith_normal_form(c)
    diag = [s[i][i] for i in range(q)]
    if any(x == 0 for x in diag):
        raise InvalidParameter("circulant system is singular: Q_a has a root of unity")
    ranges = [range(x) for x in diag]
    out = []
    for ks in itertools.product(*ranges):
        phi = [Fraction(k, x) for k, x in zip(ks, diag)]
        theta = tuple(sum((v[i][j] * phi[j] for j in range(q)), Fraction(0)) for i in range(q))
        out.append(Character(theta))
    out.sort(key=lambda ch: ch.angles)
    return out


def shift_orbits(chars: Sequence[Character]) -> List[List[Character]]:
    """Partition characters into orbits of the shift; each orbit starts at its smallest member."""
    remaining = set(chars)
    orbits = []
    for ch in sorted(chars, key=lambda c: c.angles):
        if ch not in remaining:
            continue
        orb = ch.orbit()
        for member in orb:
            remaining.discard(member)
        orbits.append(sorted(orb, key=lambda c: c.angles))
    return orbits
