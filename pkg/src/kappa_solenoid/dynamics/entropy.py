"""Topological entropy of the solenoid automorphism.

For algebraic a the entropy is log q_d plus log|r| summed over the roots of
Q_a outside the unit circle; for transcendental a it is infinite.  Roots
come from an Aberth simultaneous iteration in mpmath, and every root gets an
inclusion disk of radius d |W_k| (W_k the Weierstrass correction).  When
those disks are pairwise disjoint each holds exactly one root, which is what
makes the inside/outside decision rigorous.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import List, Tuple

import mpmath

from ..errors import ConvergenceError, InvalidParameter
from ..exactalg import IntPolynomial
from .periodic import _as_poly, fixed_count


@dataclass(frozen=True)
class RootEnclosure:
    roots: Tuple[complex, ...]
    radii: Tuple[float, ...]
    residuals: Tuple[float, ...]
    dps: int


@dataclass(frozen=True)
class EntropyReport:
    value: float
    error_bound: float
    leading_term: float
    root_moduli: Tuple[float, ...] = ()
    radii: Tuple[float, ...] = ()
    residuals: Tuple[float, ...] = ()
    notes: Tuple[str, ...] = field(default=())


def _aberth(coeffs, dps, max_iter, rng):
    d = len(coeffs) - 1
    with mpmath.workdps(dps):
        p = [mpmath.mpf(c) for c in coeffs]
        dp = [k * p[k] for k in range(1, d + 1)]
        lead = abs(p[-1])
        radius = 1 + max(abs(c) / lead for c in p[:-1])
        offset = rng.random()
        z = [
            radius * mpmath.expjpi(2 * (k + offset) / d) * (1 + mpmath.mpf(rng.random()) / 10)
            for k in range(d)
        ]
        target = mpmath.mpf(10) ** (-(dps - 8))

        def horner(cs, x):
            acc = mpmath.mpc(0)
            for c in reversed(cs):
                acc = acc * x + c
            return acc

        for _ in range(max_iter):
            biggest = mpmath.mpf(0)
            new = []
            for k in range(d):
                pk = horner(p, z[k])
                if pk == 0:
                    new.append(z[k])
                    continue
                w = pk / horner(dp, z[k])
                s = mpmath.fsum(1 / (z[k] - z[j]) for j in range(d) if j != k)
                step = w / (1 - w * s)
                new.append(z[k] - step)
                biggest = max(biggest, abs(step) / max(abs(z[k]), 1))
            z = new
            if biggest < target:
                break
        else:
            return None
        radii, residuals = [], []
        for k in range(d):
            pk = horner(p, z[k])
            prod = mpmath.fprod(z[k] - z[j] for j in range(d) if j != k)
            weier = abs(pk) / (lead * abs(prod)) if d > 1 else abs(pk) / lead
            radii.append(d * weier)
            residuals.append(abs(pk))
        return z, radii, residuals


def find_roots(poly: IntPolynomial, tol: float = 1e-12, dps: int = 40, max_iter: int = 400,
               restarts: int = 6, seed: int = 0) -> RootEnclosure:
    """Roots of an integer polynomial with guaranteed, pairwise disjoint inclusion disks."""
    coeffs = _as_poly(poly).coeffs
    d = len(coeffs) - 1
    rng = random.Random(seed)
    last = None
    for _ in range(restarts):
        out = _aberth(coeffs, dps, max_iter, rng)
        if out is None:
            continue
        z, radii, residuals = out
        last = residuals
        disjoint = all(
            abs(z[i] - z[j]) > radii[i] + radii[j] for i in range(d) for j in range(i + 1, d)
        )
        if disjoint and max(residuals) < tol:
            return RootEnclosure(
                tuple(complex(x) for x in z),
                tuple(float(r) for r in radii),
                tuple(float(r) for r in residuals),
                dps,
            )
        dps += 20
    raise ConvergenceError(
        f"root finder did not converge for {coeffs}",
        residuals=None if last is None else [float(r) for r in last],
    )


def entropy(param, tol: float = 1e-12, max_refinements: int = 3) -> EntropyReport:
    """Entropy of the automorphism with a rigorous error bound (algebraic case).

    A root whose inclusion disk meets the unit circle after the refinements
    may sit on it (Salem polynomials do); it then contributes at most
    log(1 + radius), which goes into the error bound instead of the value.
    """
    if not tol > 0:
        raise InvalidParameter("tol must be positive")
    if not getattr(param, "is_algebraic", True):
        return EntropyReport(math.inf, 0.0, math.inf, notes=("transcendental: entropy is infinite",))
    poly = _as_poly(param)
    lead = math.log(poly.leading)
    dps = 40
    for _ in range(max_refinements):
        enc = find_roots(poly, tol=tol, dps=dps)
        moduli = [abs(r) for r in enc.roots]
        if not any(abs(m - 1) <= rad for m, rad in zip(moduli, enc.radii)):
            break
        dps *= 2
    value, err, notes = lead, 0.0, []
    for m, rad in zip(moduli, enc.radii):
        if m - rad > 1:
            value += math.log(m)
            err += math.log(m / (m - rad))
        elif m + rad >= 1:
            err += math.log1p(rad)
            notes.append(f"root of modulus {m:.15g} within {rad:.2g} of the unit circle")
    return EntropyReport(
        value=value,
        error_bound=err,
        leading_term=lead,
        root_moduli=tuple(moduli),
        radii=enc.radii,
        residuals=enc.residuals,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class GrowthTable:
    rows: Tuple[Tuple[int, int, float], ...]
    entropy: float

    @property
    def deviations(self) -> List[float]:
        return [abs(rate - self.entropy) for _, _, rate in self.rows]

    def tail_monotone(self, start: int = None) -> bool:
        """Deviation non-increasing from ``start`` (default: second half) on."""
        devs = self.deviations
        if start is None:
            start = len(devs) // 2
        tail = devs[max(start - 1, 0):]
        return all(b <= a for a, b in zip(tail, tail[1:]))


def entropy_growth_check(poly, qmax: int) -> GrowthTable:
    """Exact c_q for q <= qmax alongside log(c_q)/q and the entropy it approaches."""
    if qmax < 2:
        raise InvalidParameter("qmax must be at least 2")
    poly = _as_poly(poly)
    rows = []
    for q in range(1, qmax + 1):
        c = fixed_count(poly, q)
        rows.append((q, c, math.log(c) / q))
    return GrowthTable(tuple(rows), entropy(poly).value)

