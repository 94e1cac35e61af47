"""The group morphism R^d -> S_a and aperiodicity witnesses.

phi in R^d maps to the orbit z_k = (A / q_d)^k phi (mod Z^d), k in Z, where A
is the companion matrix; negative k use the exact rational inverse.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..exactalg import companion_matrix
from .periodic import _as_poly

FLOAT_TOL = 1e-9


def _rational_step(poly):
    qd = poly.leading
    return [[Fraction(x, qd) for x in row] for row in companion_matrix(poly)]


def _inverse(m):
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _apply(m, vec):
    return [sum(m[i][j] * vec[j] for j in range(len(vec))) for i in range(len(m))]


def bohr_embed(poly, phi: Sequence, k_range: Iterable[int]) -> Dict[int, Tuple]:
    """Angle vectors z_k (mod 1) for k in ``k_range``.

    Exact when ``phi`` holds Fractions or ints, floating point otherwise.
    Consecutive entries satisfy q_d z_{k+1} = A z_k (mod Z^d).
    """
    poly = _as_poly(poly)
    if len(phi) != poly.degree:
        raise ValueError(f"phi must have length {poly.degree}")
    exact = all(isinstance(x, (int, Fraction)) for x in phi)
    step = _rational_step(poly)
    back = _inverse(step)
    ks = sorted(set(k_range))
    out = {}
    if not ks:
        return out
    # walk outward from 0 so each z_k costs one matrix-vector product
    vec_exact = [Fraction(x) for x in phi] if exact else None
    vec_float = None if exact else [float(x) for x in phi]

    def reduce(v):
        return tuple(x % 1 for x in v)

    for direction, matrix in ((1, step), (-1, back)):
        cur = vec_exact if exact else vec_float
        mat = matrix if exact else [[float(x) for x in row] for row in matrix]
        k = 0
        targets = [k for k in ks if (k >= 0 if direction > 0 else k < 0)]
        if not targets:
            continue
        last = max(targets) if direction > 0 else min(targets)
        while True:
            if k in ks:
                out[k] = reduce(cur)
            if k == last:
                break
            # no reduction mod 1 here: A / q_d does not preserve Z^d
            cur = _apply(mat, cur)
            k += direction
    return out


def _torus_distance(x, y) -> float:
    delta = (x - y) % 1
    return float(min(delta, 1 - delta))


def aperiodicity_witness(poly, phi: Sequence, qmax: int, window: int = 0) -> Dict[int, Optional[int]]:
    """For each q <= qmax, a k with z_{k+q} != z_k, or None if none exists in the window.

    A None entry means the point looks q-periodic on the checked range.
    """
    poly = _as_poly(poly)
    ks = range(-window, window + qmax + 1)
    z = bohr_embed(poly, phi, ks)
    exact = all(isinstance(x, (int, Fraction)) for x in phi)
    result = {}
    for q in range(1, qmax + 1):
        witness = None
        for k in range(-window, window + 1):
            dist = max(_torus_distance(a, b) for a, b in zip(z[k + q], z[k]))
            if (dist != 0) if exact else (dist > FLOAT_TOL):
                witness = k
                break
        result[q] = witness
    return result


def orbit_periods(poly, phi: Sequence, qmax: int) -> List[int]:
    """Periods q <= qmax for which the exact point phi is fixed by the q-th shift."""
    return [q for q, w in aperiodicity_witness(poly, phi, qmax).items() if w is None]
