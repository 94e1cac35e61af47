"""Isomorphism invariants of U_a: periodic-point counts, entropy, K-groups.

Equal invariants never prove isomorphism; only a mismatch is conclusive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from ..errors import InvalidParameter
from ..exactalg import Algebraic, IntPolynomial, Transcendental
from .entropy import entropy
from .periodic import fixed_count

DISTINGUISHED = "distinguished"
INDISTINGUISHABLE = "indistinguishable"


@dataclass(frozen=True)
class ClassificationVerdict:
    outcome: str
    qmax: float
    witness_q: Optional[int] = None
    counts: Optional[Tuple[int, int]] = None
    entropy_gap: Optional[float] = None
    notes: Tuple[str, ...] = ()

    @property
    def distinguished(self) -> bool:
        return self.outcome == DISTINGUISHED


def _param(x):
    if isinstance(x, IntPolynomial):
        return Algebraic(x)
    return x


def classify(a, b, qmax: int = 12, tol: float = 1e-9) -> ClassificationVerdict:
    a, b = _param(a), _param(b)
    if isinstance(a, Transcendental) and isinstance(b, Transcendental):
        return ClassificationVerdict(
            INDISTINGUISHABLE, math.inf,
            notes=("isomorphic: all transcendental parameters give the same algebra",),
        )
    if a.is_algebraic != b.is_algebraic:
        alg = a if a.is_algebraic else b
        h = entropy(alg).value
        return ClassificationVerdict(
            DISTINGUISHED, qmax, entropy_gap=math.inf,
            notes=(f"entropy {h:.12g} vs infinity: algebraic and transcendental never match",),
        )
    if qmax < 1:
        raise InvalidParameter("qmax must be positive")
    notes = []
    pa, pb = a.poly, b.poly
    if pa == pb:
        notes.append("identical polynomials")
    elif pa.reciprocal() == pb:
        notes.append("reciprocal pair (a' = 1/a): expected isomorphic")
    for q in range(1, qmax + 1):
        ca, cb = fixed_count(pa, q), fixed_count(pb, q)
        if ca != cb:
            return ClassificationVerdict(
                DISTINGUISHED, qmax, witness_q=q, counts=(ca, cb),
                notes=tuple(notes) + (f"c_{q} = {ca} vs {cb}",),
            )
    ha, hb = entropy(pa, tol=min(tol, 1e-12)), entropy(pb, tol=min(tol, 1e-12))
    gap = abs(ha.value - hb.value)
    if gap > ha.error_bound + hb.error_bound + tol:
        return ClassificationVerdict(
            DISTINGUISHED, qmax, entropy_gap=gap,
            notes=tuple(notes) + (f"entropy {ha.value:.12g} vs {hb.value:.12g}",),
        )
    return ClassificationVerdict(INDISTINGUISHABLE, qmax, entropy_gap=gap, notes=tuple(notes))
