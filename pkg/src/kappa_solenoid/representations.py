"""Finite-dimensional unitary representations of U_a built from periodic points.

A block is fixed by a character chi of least period q and a corner angle x.
The element (b, 0) acts diagonally by chi(b), chi(a^-1 b), ..., chi(a^-(q-1) b)
and u = (0, 1) acts as the cyclic shift e_s -> e_{s+1} with e^{2 pi i x}
picked up when wrapping from e_{q-1} back to e_0.  With that orientation
Pi(u) Pi(b, 0) Pi(u)^-1 = Pi(a b, 0), matching the group law of G_a.

Every Pi(g) is a monomial matrix (a permutation times phases), so products,
inverses and comparisons are done exactly on angles whenever the character
and x are rational; dense numpy matrices are only produced for norms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .dynamics import Character, enumerate_characters, least_period_count, shift_orbits
from .errors import InvalidParameter
from .exactalg import Algebraic, BElement, GroupElement, Parameter

Angle = Union[Fraction, float]

DEFAULT_X_SCHEDULE: Tuple[Angle, ...] = (Fraction(0), Fraction(1, 4), (math.sqrt(5) - 1) / 2)
SEPARATION_TOL = 1e-9


def char_angle(chi: Character, b: BElement) -> Angle:
    """Angle of chi(b) mod 1, exact for rational characters."""
    return sum((m * chi.angle(n) for n, m in b.monomials), Fraction(0)) % 1


def char_eval(chi: Character, b: BElement) -> complex:
    return complex(np.exp(2j * np.pi * float(char_angle(chi, b))))


def _phase(angle, scale=1) -> complex:
    return scale * complex(np.exp(2j * np.pi * float(angle)))


@dataclass(frozen=True)
class MonomialMatrix:
    """``M e_s = scale_s * exp(2 pi i angle_s) e_{perm_s}``."""

    perm: Tuple[int, ...]
    angles: Tuple[Angle, ...]
    scales: Tuple = None

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(a % 1 for a in self.angles))
        if self.scales is None:
            object.__setattr__(self, "scales", (1,) * len(self.perm))

    @property
    def dim(self) -> int:
        return len(self.perm)

    @property
    def exact(self) -> bool:
        return all(isinstance(a, (int, Fraction)) for a in self.angles) and all(
            isinstance(s, (int, Fraction)) for s in self.scales
        )

    @classmethod
    def diagonal(cls, angles: Sequence[Angle]) -> "MonomialMatrix":
        return cls(tuple(range(len(angles))), tuple(angles))

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        perm = tuple(self.perm[other.perm[s]] for s in range(other.dim))
        angles = tuple(other.angles[s] + self.angles[other.perm[s]] for s in range(other.dim))
        scales = tuple(other.scales[s] * self.scales[other.perm[s]] for s in range(other.dim))
        return MonomialMatrix(perm, angles, scales)

    def inverse(self) -> "MonomialMatrix":
        n = self.dim
        perm, angles, scales = [0] * n, [Fraction(0)] * n, [1] * n
        for s in range(n):
            t = self.perm[s]
            perm[t] = s
            angles[t] = -self.angles[s]
            sc = self.scales[s]
            scales[t] = Fraction(1, sc) if isinstance(sc, int) else 1 / sc
        return MonomialMatrix(tuple(perm), tuple(angles), tuple(scales))

    def adjoint(self) -> "MonomialMatrix":
        n = self.dim
        perm, angles, scales = [0] * n, [Fraction(0)] * n, [1] * n
        for s in range(n):
            t = self.perm[s]
            perm[t] = s
            angles[t] = -self.angles[s]
            scales[t] = self.scales[s]
        return MonomialMatrix(tuple(perm), tuple(angles), tuple(scales))

    def __pow__(self, k: int) -> "MonomialMatrix":
        base = self if k >= 0 else self.inverse()
        out = MonomialMatrix.diagonal([Fraction(0)] * self.dim)
        for _ in range(abs(k)):
            out = out @ base
        return out

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for s in range(self.dim):
            m[self.perm[s], s] = _phase(self.angles[s], self.scales[s])
        return m

    def distance(self, other: "MonomialMatrix") -> float:
        """Operator norm of the difference; exactly 0.0 for identical exact data."""
        if self.perm == other.perm:
            worst = 0.0
            for s in range(self.dim):
                same = self.angles[s] == other.angles[s] and self.scales[s] == other.scales[s]
                if not same:
                    d = abs(_phase(self.angles[s], self.scales[s]) - _phase(other.angles[s], other.scales[s]))
                    worst = max(worst, d)
            return worst
        return float(np.linalg.norm(self.to_dense() - other.to_dense(), 2))

    def unitarity_error(self) -> float:
        """||M* M - I||, which for a monomial matrix is max | |w_s|^2 - 1 |."""
        return float(max(abs(abs(s) ** 2 - 1) for s in self.scales))


@dataclass(frozen=True)
class BlockRep:
    chi: Character
    x: Angle
    corner_scale: Union[int, float] = 1  # != 1 only for deliberately broken blocks
    param: Optional[Parameter] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.chi.q

    def diag_angles(self, b: BElement) -> Tuple[Angle, ...]:
        return self._angles(b.monomials)

    def _angles(self, monomials) -> Tuple[Angle, ...]:
        return tuple(
            sum((m * self.chi.angle(n - s) for n, m in monomials), Fraction(0)) % 1
            for s in range(self.chi.q)
        )

    def rho(self, b: BElement) -> MonomialMatrix:
        return MonomialMatrix.diagonal(self.diag_angles(b))

    def shift(self, l: int = 1) -> MonomialMatrix:
        """u^l: e_s -> x^floor((s+l)/q) e_{(s+l) mod q}."""
        q = self.chi.q
        perm, angles, scales = [], [], []
        for s in range(q):
            wraps = (s + l) // q
            perm.append((s + l) % q)
            angles.append(wraps * self.x)
            sc = self.corner_scale ** wraps if wraps >= 0 else Fraction(1, 1) / self.corner_scale ** (-wraps)
            scales.append(sc)
        return MonomialMatrix(tuple(perm), tuple(angles), tuple(scales))

    def evaluate_exact(self, g: GroupElement) -> MonomialMatrix:
        return self.rho(g.b) @ self.shift(g.l)

    def evaluate(self, g: GroupElement) -> np.ndarray:
        return self.evaluate_exact(g).to_dense()

    def trace(self, g: GroupElement) -> complex:
        return complex(np.trace(self.evaluate(g)))


def build_block(chi: Character, x: Angle, allow_decomposable: bool = False,
                param: Optional[Parameter] = None) -> BlockRep:
    if not chi.is_least_period and not allow_decomposable:
        raise InvalidParameter(
            f"character has least period {chi.least_period} < {chi.q}; "
            "pass allow_decomposable=True to build the reducible block"
        )
    return BlockRep(chi, x % 1, param=param)


@dataclass(frozen=True)
class CovarianceReport:
    deviation: float
    unitarity_error: float
    exact: bool

    @property
    def ok(self) -> bool:
        return self.unitarity_error <= 1e-12 and self.deviation <= 1e-12


def verify_covariance(block: BlockRep, tests: Iterable[BElement]) -> CovarianceReport:
    """max over f of || u* rho(f) u - rho(f o alpha-hat) ||.

    For f = evaluation at b the right-hand side is rho at a^-1 b.
    """
    u = block.shift(1)
    ustar = u.adjoint()
    worst, exact = 0.0, u.exact and block.chi.exact
    for b in tests:
        lhs = ustar @ block.rho(b) @ u
        rhs = block.rho(b.shift(-1))
        worst = max(worst, lhs.distance(rhs))
    return CovarianceReport(worst, u.unitarity_error(), exact)


def _check_bs_param(block: BlockRep, m: int):
    if not isinstance(m, int) or m < 2:
        raise InvalidParameter(f"the relation UVU^-1 = V^m needs an integer m >= 2, got {m!r}")
    if block.param is not None:
        if not isinstance(block.param, Algebraic) or block.param.poly.coeffs != (-m, 1):
            raise InvalidParameter(
                f"parameter {block.param} is not x - {m}: the relation is not monomial"
            )


def relation_deviation(block: BlockRep, m: int) -> float:
    """|| Pi(u) Pi(v) Pi(u)^-1 - Pi(v)^m || on one block (exact 0.0 when rational)."""
    _check_bs_param(block, m)
    u = block.shift(1)
    v = MonomialMatrix.diagonal(block._angles(((0, 1),)))
    return (u @ v @ u.inverse()).distance(v ** m)


def verify_relation(target, m: int, tol: float = 1e-12) -> bool:
    blocks = target.blocks if isinstance(target, RepFamily) else [target]
    return all(relation_deviation(b, m) <= tol for b in blocks)


@dataclass(frozen=True)
class RepFamily:
    """Finite direct sum of blocks keyed by (q, orbit index, x index)."""

    keys: Tuple[Tuple[int, int, int], ...]
    blocks: Tuple[BlockRep, ...]
    x_schedule: Tuple[Angle, ...]

    @property
    def total_dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(zip(self.keys, self.blocks))


def build_family(param: Parameter, qmax: int, x_schedule: Sequence[Angle] = DEFAULT_X_SCHEDULE) -> RepFamily:
    """One block per (least-period-q orbit, x) for q <= qmax.

    Blocks over the same orbit are unitarily equivalent, so only the
    lexicographically smallest angle vector of each orbit is kept.
    """
    if not isinstance(param, Algebraic):
        raise InvalidParameter("periodic characters are enumerated for algebraic parameters only")
    keys, blocks = [], []
    for q in range(1, qmax + 1):
        if least_period_count(param.poly, q) == 0:
            continue
        chars = [c for c in enumerate_characters(param.poly, q) if c.is_least_period]
        for i, orbit in enumerate(shift_orbits(chars)):
            for j, x in enumerate(x_schedule):
                keys.append((q, i, j))
                blocks.append(build_block(orbit[0], x, param=param))
    return RepFamily(tuple(keys), tuple(blocks), tuple(x_schedule))


@dataclass(frozen=True)
class SeparationResult:
    separated: bool
    witness: Optional[Tuple[GroupElement, GroupElement]] = None


def separation_check(family: RepFamily, elements: Sequence[GroupElement]) -> SeparationResult:
    """True iff every pair of distinct elements differs on some block."""
    images = [[b.evaluate(g) for b in family.blocks] for g in elements]
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if not any(
                np.abs(x - y).max() > SEPARATION_TOL for x, y in zip(images[i], images[j])
            ):
                return SeparationResult(False, (elements[i], elements[j]))
    return SeparationResult(True)


@dataclass(frozen=True)
class WindowedOperator:
    matrix: np.ndarray
    coords: Tuple[int, ...]
    boundary_rows: Tuple[int, ...]
    diagonal_periodic: bool


def windowed_induced(chi: Character, g: GroupElement, n: int) -> WindowedOperator:
    """Truncation of the induced representation on l^2 coordinates -N..N.

    (pi(b) xi)_k = chi(a^k b) xi_k and (U xi)_k = xi_{k+1}; rows whose
    shifted source falls outside the window are zero and flagged.
    """
    if n < 0:
        raise InvalidParameter("window half-width must be nonnegative")
    coords = tuple(range(-n, n + 1))
    size = len(coords)
    diag = [
        sum((m * chi.angle(k0 + k) for k0, m in g.b.monomials), Fraction(0)) % 1 for k in coords
    ]
    shift = np.zeros((size, size))
    boundary = []
    for r, k in enumerate(coords):
        src = k + g.l
        if -n <= src <= n:
            shift[r, src + n] = 1.0
        else:
            boundary.append(k)
    mat = np.diag([_phase(t) for t in diag]) @ shift
    q = chi.q
    periodic = all(diag[i] == diag[i + q] for i in range(size - q))
    return WindowedOperator(mat, coords, tuple(boundary), periodic)


def family_dimension_table(param: Parameter, qmax: int) -> List[Tuple[int, int]]:
    """(q, number of least-period-q orbits) for q <= qmax."""
    return [(q, least_period_count(param.poly, q) // q) for q in range(1, qmax + 1)]
