"""Block-diagonal Dirac operators on the periodic-point representation.

Both constructions put one eigenvalue scale on each period-q sector,

    mu_q = (q * c_q * 2^q)^(1/p),

which forces the q-th contribution to Tr((1 + D^2)^(-p/2)) below 2^-q and
makes p-summability provable by a geometric series.

``commuting``: D is the scalar mu_q on every q-block, so it commutes with
the whole algebra.

``mixed``: D = mu_q + diag(k_0, ..., k_{q-1}) where k runs over 1..q in
zigzag order (1, 3, 5, ..., 6, 4, 2).  D is diagonal, so it commutes with
Pi(v); cyclic neighbours differ by at most 2, so ||[D, Pi(u)]|| <= 2 and is
nonzero once q >= 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import mpmath
import numpy as np

from .dynamics import fixed_count, least_period_count
from .errors import InvalidParameter
from .exactalg import Algebraic, GroupElement
from .representations import RepFamily

COMMUTING = "commuting"
MIXED = "mixed"

CERTIFIED = "certified-summable"
DIVERGENT = "divergent-evidence"
INCONCLUSIVE = "inconclusive"

_DPS = 30


def zigzag(q: int) -> Tuple[int, ...]:
    """1..q arranged so that cyclically adjacent entries differ by at most 2."""
    odds = list(range(1, q + 1, 2))
    evens = list(range(2, q + 1, 2))
    return tuple(odds + evens[::-1])


@dataclass(frozen=True)
class DiracBlock:
    q: int
    c_q: int
    orbits: int
    offset: mpmath.mpf
    increments: Tuple[int, ...]
    bumped: bool = False

    @property
    def eigenvalues(self) -> List[float]:
        return [float(self.offset + k) for k in self.increments]

    def matrix(self) -> np.ndarray:
        return np.diag(self.eigenvalues)


@dataclass(frozen=True)
class DiracSpec:
    p: float
    mode: str
    qmax: int
    blocks: Tuple[DiracBlock, ...]
    x_count: int = 1
    provenance: str = ""

    def block(self, q: int) -> DiracBlock:
        return self.blocks[q - 1]


def _schedule(param, p: float, qmax: int, mode: str, x_count: int) -> DiracSpec:
    if not isinstance(param, Algebraic):
        raise InvalidParameter("Dirac operators are built for algebraic parameters only")
    if x_count < 1:
        raise InvalidParameter("x_count must be positive")
    blocks = []
    prev = None
    with mpmath.workdps(_DPS):
        for q in range(1, qmax + 1):
            c = fixed_count(param.poly, q)
            lp = least_period_count(param.poly, q)
            mu = mpmath.root(mpmath.mpf(q) * c * mpmath.mpf(2) ** q, p)
            bumped = False
            # offsets must increase strictly with q; raising mu only shrinks the trace
            if prev is not None and mu <= prev:
                mu, bumped = prev + 1, True
            incs = (0,) * q if mode == COMMUTING else zigzag(q)
            blocks.append(DiracBlock(q, c, lp // q, mu, incs, bumped))
            prev = mu
    provenance = (
        f"offset (q c_q 2^q)^(1/{p:g}); "
        + ("scalar per block" if mode == COMMUTING else "offset + zigzag(1..q) per block")
        + f"; each q weighted by orbit count x q x {x_count} sampled x"
    )
    return DiracSpec(p, mode, qmax, tuple(blocks), x_count, provenance)


def dirac_commuting(param, p: float, qmax: int, x_count: int = 1) -> DiracSpec:
    if not p >= 1:
        raise InvalidParameter("summability exponent must be >= 1")
    return _schedule(param, p, qmax, COMMUTING, x_count)


def dirac_mixed(param, p: float, qmax: int, x_count: int = 1) -> DiracSpec:
    if not p >= 2:
        raise InvalidParameter("the mixed construction needs p >= 2")
    return _schedule(param, p, qmax, MIXED, x_count)


@dataclass(frozen=True)
class SummabilityReport:
    exponent: float
    increments: Tuple[float, ...]
    partial_sums: Tuple[float, ...]
    tail_bound: Optional[float]
    verdict: str

    @property
    def total(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0


def summability_report(spec: DiracSpec, exponent: float) -> SummabilityReport:
    """Partial sums of Tr((1 + D^2)^(-exponent/2)) by q, with a tail bound when provable.

    For exponent >= p every q-block satisfies mu_q >= (q c_q 2^q)^(1/p) > 1,
    so its contribution is at most x_count * lp_q / (q c_q 2^q) <= x_count / (q 2^q)
    and the tail beyond qmax is at most x_count 2^-qmax / (qmax + 1).
    """
    if not exponent > 0:
        raise InvalidParameter("exponent must be positive")
    incs, sums = [], []
    with mpmath.workdps(_DPS):
        total = mpmath.mpf(0)
        half = mpmath.mpf(exponent) / 2
        for blk in spec.blocks:
            per_orbit = mpmath.fsum((1 + (blk.offset + k) ** 2) ** (-half) for k in blk.increments)
            inc = per_orbit * blk.orbits * spec.x_count
            total += inc
            incs.append(float(inc))
            sums.append(float(total))
    if exponent >= spec.p:
        tail = spec.x_count * 2.0 ** (-spec.qmax) / (spec.qmax + 1)
        verdict = CERTIFIED
    else:
        tail = None
        nz = [x for x in incs if x > 0]
        if len(nz) >= 3 and all(b > a for a, b in zip(nz[-3:], nz[-2:])):
            verdict = DIVERGENT
        else:
            verdict = INCONCLUSIVE
    return SummabilityReport(exponent, tuple(incs), tuple(sums), tail, verdict)


@dataclass(frozen=True)
class CommutatorReport:
    per_block: Tuple[Tuple[Tuple[int, int, int], float], ...]
    supremum: float


def commutator_norm(spec: DiracSpec, family: RepFamily, g: GroupElement) -> CommutatorReport:
    """||[D, Pi(g)]|| on each block of ``family``.

    Pi(g) is monomial, so [D, Pi(g)] e_s = (d_{pi(s)} - d_s) w_s e_{pi(s)} and its
    norm is the largest |d_{pi(s)} - d_s| |w_s|.  Offsets cancel inside a block,
    so only the integer increments enter.
    """
    if len(family.x_schedule) != spec.x_count:
        raise InvalidParameter(
            f"family samples {len(family.x_schedule)} x values, Dirac spec expects {spec.x_count}"
        )
    out = []
    for key, blk in family:
        q, orbit, _ = key
        if q > spec.qmax or orbit >= spec.block(q).orbits:
            raise InvalidParameter(f"family block {key} has no matching Dirac block")
        incs = spec.block(q).increments
        m = blk.evaluate_exact(g)
        norm = max(abs(incs[m.perm[s]] - incs[s]) * abs(m.scales[s]) for s in range(q))
        out.append((key, float(norm)))
    sup = max((n for _, n in out), default=0.0)
    return CommutatorReport(tuple(out), sup)


def dense_commutator_norm(spec: DiracSpec, family: RepFamily, g: GroupElement) -> float:
    """Same supremum through dense matrices; an independent cross-check."""
    worst = 0.0
    for (q, _, _), blk in family:
        d = spec.block(q).matrix()
        m = blk.evaluate(g)
        worst = max(worst, float(np.linalg.norm(d @ m - m @ d, 2)))
    return worst


def trace_bound(spec: DiracSpec) -> float:
    """Upper bound for the full (untruncated) trace at exponent p."""
    return spec.x_count * sum(1.0 / (q * 2.0**q) for q in range(1, spec.qmax + 1)) + (
        spec.x_count * 2.0 ** (-spec.qmax) / (spec.qmax + 1)
    )

