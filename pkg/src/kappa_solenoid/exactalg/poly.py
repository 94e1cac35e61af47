"""Integer polynomials defining an algebraic deformation parameter.

Coefficients are always stored ascending: ``(q_0, q_1, ..., q_d)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence, Tuple

from ..errors import InvalidParameter, ReducibleError
from .intmatrix import IntMatrix, det_bareiss

#: irreducibility is certified exhaustively up to this degree
IRREDUCIBILITY_MAX_DEGREE = 4


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: Tuple[int, ...]
    irreducibility_verified: bool = field(default=True, compare=False)

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2 or c[-1] == 0:
            raise InvalidParameter(f"need degree >= 1 with nonzero leading coefficient, got {c}")
        if c[0] == 0:
            raise InvalidParameter("constant term q_0 = 0: a would not be invertible")
        if c[-1] < 0:
            raise InvalidParameter("leading coefficient must be positive")
        if reduce(math.gcd, c) != 1:
            raise InvalidParameter(f"polynomial {c} is not primitive")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reciprocal(self) -> "IntPolynomial":
        """Reversed-coefficient polynomial, sign normalised (root 1/a)."""
        rev = self.coeffs[::-1]
        if rev[-1] < 0:
            rev = tuple(-c for c in rev)
        return IntPolynomial(rev, self.irreducibility_verified)

    def __str__(self):
        return format_poly(self.coeffs)


def format_poly(coeffs: Sequence[int]) -> str:
    terms = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if j == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + ("x" if j == 1 else f"x^{j}")
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f"{sign}{body}"
    return out


# --- rational polynomial helpers (ascending Fraction lists) -----------------

def _strip(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _divmod(num, den):
    num = [Fraction(x) for x in _strip(num)]
    den = [Fraction(x) for x in _strip(den)]
    if len(num) < len(den):
        return [], num
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        c = num[-1] / den[-1]
        quot[shift] = c
        for i, d in enumerate(den):
            num[i + shift] -= c * d
        num = _strip(num)
    return quot, num


def _divisors(n: int):
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _exact_factor(coeffs, trial):
    """Quotient if ``trial`` divides ``coeffs`` in Z[x], else None."""
    quot, rem = _divmod(coeffs, trial)
    if rem or any(q.denominator != 1 for q in quot):
        return None
    return tuple(int(q) for q in quot)


def _find_factor(coeffs: Tuple[int, ...]) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Search for a factor of degree 1 or 2 (enough to certify d <= 4)."""
    d = len(coeffs) - 1
    q0, qd = coeffs[0], coeffs[-1]
    # rational root test: root r/s with r | q_0, s | q_d
    for s in _divisors(qd):
        for r in _divisors(q0):
            for sign in (1, -1):
                trial = (-sign * r, s)
                if math.gcd(r, s) != 1:
                    continue
                quot = _exact_factor(coeffs, trial)
                if quot is not None:
                    return trial, quot
    if d < 4:
        return None
    # quadratic factor c x^2 + b x + e; |b| <= 2 * M(Q) <= 2 * ||Q||_2
    bound = 2 * math.isqrt(sum(c * c for c in coeffs)) + 2
    for c in _divisors(qd):
        for e_abs in _divisors(q0):
            for e in (e_abs, -e_abs):
                for b in range(-bound, bound + 1):
                    trial = (e, b, c)
                    quot = _exact_factor(coeffs, trial)
                    if quot is not None:
                        return trial, quot
    return None


def count_positive_roots(coeffs: Sequence[int]) -> int:
    """Number of distinct real roots in (0, inf), via a Sturm sequence."""
    p0 = [Fraction(c) for c in _strip(coeffs)]
    p1 = [k * c for k, c in enumerate(p0)][1:]
    seq = [p0, p1]
    while True:
        _, rem = _divmod(seq[-2], seq[-1])
        if not rem:
            break
        seq.append([-r for r in rem])

    def variations(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    at_zero = [(p[0] > 0) - (p[0] < 0) if p else 0 for p in seq]
    at_inf = [(p[-1] > 0) - (p[-1] < 0) for p in seq]
    return variations(at_zero) - variations(at_inf)


def normalize_poly(raw: Sequence[int]) -> IntPolynomial:
    """Validate raw integer coefficients and return the primitive Q_a.

    Rejects the zero polynomial, q_0 = 0, a = 1, reducible input (with the
    factor pair attached to the exception) and polynomials with no positive
    real root.  Above degree 4 irreducibility is not certified: a warning is
    emitted and ``irreducibility_verified`` is False.
    """
    coeffs = _strip(int(c) for c in raw)
    if not coeffs:
        raise InvalidParameter("zero polynomial")
    if len(coeffs) < 2:
        raise InvalidParameter("constant polynomial: degree must be >= 1")
    if coeffs[0] == 0:
        raise InvalidParameter("q_0 = 0: a would not be invertible")
    g = reduce(math.gcd, coeffs)
    sign = 1 if coeffs[-1] > 0 else -1
    coeffs = tuple(sign * c // g for c in coeffs)
    d = len(coeffs) - 1
    if sum(coeffs) == 0 and d == 1:
        raise InvalidParameter("a=1 excluded")

    verified = True
    if 1 < d <= IRREDUCIBILITY_MAX_DEGREE:
        found = _find_factor(coeffs)
        if found is not None:
            f, g2 = found
            raise ReducibleError(
                f"{format_poly(coeffs)} = ({format_poly(f)})({format_poly(g2)}) is reducible",
                witness=found,
            )
    elif d > IRREDUCIBILITY_MAX_DEGREE:
        if sum(coeffs) == 0:
            quot = _exact_factor(coeffs, (-1, 1))
            raise ReducibleError("x - 1 divides the polynomial", witness=((-1, 1), quot))
        verified = False
        warnings.warn(
            f"irreducibility of degree-{d} polynomial not verified", stacklevel=2
        )
    if count_positive_roots(coeffs) == 0:
        raise InvalidParameter(f"{format_poly(coeffs)} has no positive real root")
    return IntPolynomial(coeffs, verified)


# --- deformation parameters --------------------------------------------------

@dataclass(frozen=True)
class DeformationParams:
    kappa: float
    omega0: float


def params_to_a(p: DeformationParams, max_denominator: int = 1000, tol: float = 1e-12):
    """Return ``(a, poly)`` with ``a = exp(-omega0 / kappa)``.

    ``poly`` is ``l x - m`` when a is within ``tol`` of a rational m/l with
    small denominator, otherwise None.
    """
    if not p.kappa > 0:
        raise InvalidParameter("kappa must be positive")
    a = math.exp(-p.omega0 / p.kappa)
    if abs(a - 1.0) < tol:
        raise InvalidParameter("a=1 excluded")
    frac = Fraction(a).limit_denominator(max_denominator)
    poly = None
    if abs(a - frac) < tol:
        poly = normalize_poly([-frac.numerator, frac.denominator])
    return a, poly


# --- companion matrix and resultant -----------------------------------------

def companion_matrix(q: IntPolynomial) -> IntMatrix:
    """Integer matrix A with ``q_d a^j = sum_k A[j][k] a^(k-1)`` (1-based j, k).

    Rows 1..d-1 carry q_d on the superdiagonal, the last row is -q_0..-q_{d-1}.
    """
    d, qd = q.degree, q.leading
    a = [[qd if j == i + 1 else 0 for j in range(d)] for i in range(d - 1)]
    a.append([-c for c in q.coeffs[:d]])
    return a


def _as_coeffs(p) -> Tuple[int, ...]:
    if isinstance(p, IntPolynomial):
        return p.coeffs
    return tuple(_strip(int(c) for c in p))


def sylvester_matrix(p, g) -> IntMatrix:
    """Sylvester matrix with the rows of ``p`` on top (descending powers)."""
    pc, gc = _as_coeffs(p), _as_coeffs(g)
    m, n = len(pc) - 1, len(gc) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(pc[::-1]) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(gc[::-1]) + [0] * (size - n - 1 - i))
    return rows


def resultant(p, g) -> int:
    pc, gc = _as_coeffs(p), _as_coeffs(g)
    if not pc or not gc:
        raise InvalidParameter("resultant of a zero polynomial")
    if len(pc) == 1 and len(gc) == 1:
        return 1
    return det_bareiss(sylvester_matrix(pc, gc))
