"""Simple random walk on the Cayley graph of G_a with steps u^{+-1}, v^{+-1}.

Exact distributions are propagated as integer path counts keyed by the
canonical form of each group element; Monte Carlo paths are simulated in
numpy with the Laurent coefficients of b stored per path, so a return to
the identity is decided exactly.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import GuardExceeded, InvalidParameter
from .exactalg import Algebraic, BElement, GroupElement, IntPolynomial, power_vector

EXACT_GUARD = 16
BALL_GUARD = 14
_PRIMES = (2147483647, 2147483629)
_CHUNK = 100_000


def z2_control() -> Algebraic:
    """a = 1, where G_a degenerates to Z^2: the polynomial-growth baseline."""
    return Algebraic(IntPolynomial((-1, 1)))


# --- canonical keys for fast propagation ------------------------------------

class _Stepper:
    """Right multiplication by generators on (key of b, l) pairs."""

    def __init__(self, param):
        self.param = param
        self.algebraic = param.is_algebraic

    def zero(self):
        if self.algebraic:
            return tuple(Fraction(0) for _ in range(self.param.poly.degree))
        return ()

    def add_power(self, key, l, sign):
        if self.algebraic:
            vec = power_vector(self.param.poly, l)
            return tuple(x + sign * y for x, y in zip(key, vec))
        d = dict(key)
        d[l] = d.get(l, 0) + sign
        if d[l] == 0:
            del d[l]
        return tuple(sorted(d.items()))

    def neighbours(self, state):
        key, l = state
        return (
            (key, l + 1),
            (key, l - 1),
            (self.add_power(key, l, 1), l),
            (self.add_power(key, l, -1), l),
        )


def _monomials_step(mono, move, l):
    d = dict(mono)
    if move == 2:
        d[l] = d.get(l, 0) + 1
    elif move == 3:
        d[l] = d.get(l, 0) - 1
    return tuple((n, m) for n, m in sorted(d.items()) if m)


@dataclass
class Distribution:
    """Law of the walk after ``t`` steps, as exact path counts over ``denominator``."""

    param: object
    t: int
    counts: Dict[tuple, int]
    representatives: Dict[tuple, tuple]
    denominator: int
    lazy: bool = False

    def element(self, state) -> GroupElement:
        mono = self.representatives[state]
        return GroupElement(BElement(self.param, dict(mono)), state[1])

    def prob(self, g: GroupElement) -> Fraction:
        return Fraction(self.counts.get(g.key, 0), self.denominator)

    @property
    def return_probability(self) -> Fraction:
        zero = _Stepper(self.param).zero()
        return Fraction(self.counts.get((zero, 0), 0), self.denominator)

    def total(self) -> Fraction:
        return Fraction(sum(self.counts.values()), self.denominator)

    def items(self):
        for state, c in self.counts.items():
            yield self.element(state), Fraction(c, self.denominator)

    def __len__(self):
        return len(self.counts)


def _evolve(param, t: int, lazy: bool, guard: int):
    if t < 0:
        raise InvalidParameter("step count must be nonnegative")
    if t > guard:
        raise GuardExceeded(f"exact convolution beyond t={guard} is exponential; use mc_return")
    st = _Stepper(param)
    start = (st.zero(), 0)
    counts = {start: 1}
    reps = {start: ()}
    stay = 4 if lazy else 0
    returns = [Fraction(1)]
    denom = 1
    for _ in range(t):
        new: Dict[tuple, int] = {}
        for state, c in counts.items():
            if stay:
                new[state] = new.get(state, 0) + stay * c
            for move, nxt in enumerate(st.neighbours(state)):
                if nxt not in new:
                    new[nxt] = c
                    if nxt not in reps:
                        reps[nxt] = _monomials_step(reps[state], move, state[1])
                else:
                    new[nxt] += c
        counts = new
        denom *= 8 if lazy else 4
        returns.append(Fraction(counts.get(start, 0), denom))
    reps = {s: reps[s] for s in counts}
    return Distribution(param, t, counts, reps, denom, lazy), returns


def exact_distribution(param, t: int, lazy: bool = False, guard: int = EXACT_GUARD) -> Distribution:
    """t-fold convolution of the uniform step on {u, u^-1, v, v^-1}.

    ``lazy`` holds still with probability 1/2.
    """
    return _evolve(param, t, lazy, guard)[0]


def exact_return_curve(param, tmax: int, lazy: bool = False, guard: int = EXACT_GUARD) -> List[Fraction]:
    """p_n(e) for n = 0..tmax from a single propagation."""
    return _evolve(param, tmax, lazy, guard)[1]


# --- Monte Carlo --------------------------------------------------------------

@dataclass(frozen=True)
class MCEstimate:
    t: int
    hits: int
    samples: int

    @property
    def estimate(self) -> float:
        return self.hits / self.samples

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.samples)

    @property
    def ci95(self) -> Tuple[float, float]:
        """Wilson score interval."""
        z, n, p = 1.959963984540054, self.samples, self.estimate
        centre = (p + z * z / (2 * n)) / (1 + z * z / n)
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)
        return max(0.0, centre - half), min(1.0, centre + half)


def _power_table_mod(poly, tmax: int, prime: int) -> np.ndarray:
    rows = []
    for n in range(-tmax, tmax + 1):
        rows.append([
            (c.numerator % prime) * pow(c.denominator % prime, -1, prime) % prime
            for c in power_vector(poly, n)
        ])
    return np.array(rows, dtype=np.int64)


class _ReturnTester:
    def __init__(self, param, tmax):
        self.param = param
        self.tmax = tmax
        self.tables = None
        if param.is_algebraic:
            self.tables = [_power_table_mod(param.poly, tmax, p) for p in _PRIMES]
        self.confirmed: Dict[bytes, bool] = {}
        weights = np.random.default_rng(0x5EED).integers(1, 2**62, size=2 * tmax + 1, dtype=np.int64)
        self.row_weights = weights

    def _exact_zero(self, row: np.ndarray) -> bool:
        key = row.tobytes()
        if key not in self.confirmed:
            mono = {n - self.tmax: int(m) for n, m in enumerate(row) if m}
            self.confirmed[key] = BElement(self.param, mono).is_zero()
        return self.confirmed[key]

    def count_zero(self, coeffs: np.ndarray) -> int:
        """Number of rows whose Laurent polynomial is 0 in B_a."""
        if len(coeffs) == 0:
            return 0
        if self.tables is None:
            return int(np.count_nonzero(~coeffs.any(axis=1)))
        c64 = coeffs.astype(np.int64)
        mask = np.ones(len(coeffs), dtype=bool)
        for prime, table in zip(_PRIMES, self.tables):
            mask &= ~((c64 @ table) % prime).any(axis=1)
        cands = coeffs[mask]
        if len(cands) == 0:
            return 0
        # modular hashes only rule rows out; every survivor is confirmed exactly.
        # Survivors are grouped by a wrapping 64-bit row hash, and rows that differ
        # from their group's representative (hash collisions) are confirmed one by one.
        with np.errstate(over="ignore"):
            h = cands.astype(np.int64) @ self.row_weights
        _, first, inverse = np.unique(h, return_index=True, return_inverse=True)
        same = (cands == cands[first][inverse]).all(axis=1)
        verdict = np.array([self._exact_zero(cands[i]) for i in first], dtype=bool)
        total = int(np.count_nonzero(verdict[inverse] & same))
        total += sum(self._exact_zero(row) for row in cands[~same])
        return total


def _simulate_chunk(param, tmax, n, seed_seq, lazy, tester):
    rng = np.random.default_rng(seed_seq)
    hi = 8 if lazy else 4
    steps = rng.integers(0, hi, size=(n, tmax), dtype=np.int8)
    l = np.zeros(n, dtype=np.int64)
    coeffs = np.zeros((n, 2 * tmax + 1), dtype=np.int16)
    hits = np.zeros(tmax + 1, dtype=np.int64)
    hits[0] = n
    rows = np.arange(n)
    for k in range(tmax):
        s = steps[:, k]
        for move, delta in ((2, 1), (3, -1)):
            sel = s == move
            coeffs[rows[sel], l[sel] + tmax] += delta
        l += (s == 0).astype(np.int64) - (s == 1).astype(np.int64)
        at_zero = l == 0
        hits[k + 1] = tester.count_zero(coeffs[at_zero])
    return hits


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get("KS_THREADS", "1") or 1)
    return max(1, threads)


def mc_return_curve(param, tmax: int, samples: int, seed: int, lazy: bool = False,
                    threads: Optional[int] = None) -> List[MCEstimate]:
    """Estimates of p_n(e) for n = 0..tmax from ``samples`` paths of length tmax.

    Chunks draw from independent children of ``SeedSequence(seed)``, so the
    result does not depend on the thread count.
    """
    if samples < 1:
        raise InvalidParameter("samples must be >= 1")
    if tmax < 0:
        raise InvalidParameter("step count must be nonnegative")
    if tmax == 0:
        return [MCEstimate(0, samples, samples)]
    sizes = [_CHUNK] * (samples // _CHUNK)
    if samples % _CHUNK:
        sizes.append(samples % _CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    tester = _ReturnTester(param, tmax)

    def job(i):
        return _simulate_chunk(param, tmax, sizes[i], seeds[i], lazy, tester)

    workers = _threads(threads)
    if workers == 1:
        parts = [job(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    hits = np.sum(parts, axis=0)
    return [MCEstimate(t, int(h), samples) for t, h in enumerate(hits)]


def mc_return(param, t: int, samples: int, seed: int, lazy: bool = False,
              threads: Optional[int] = None) -> MCEstimate:
    return mc_return_curve(param, t, samples, seed, lazy, threads)[t]


# --- growth ------------------------------------------------------------------

def ball_sizes(param, rmax: int, guard: int = BALL_GUARD) -> List[int]:
    """|B(r)| for r = 0..rmax in the word metric of {u, u^-1, v, v^-1}."""
    if rmax < 0:
        raise InvalidParameter("radius must be nonnegative")
    if rmax > guard:
        raise GuardExceeded(f"ball enumeration beyond r={guard} is exponential")
    st = _Stepper(param)
    start = (st.zero(), 0)
    seen = {start}
    frontier = [start]
    sizes = [1]
    for _ in range(rmax):
        nxt = []
        for state in frontier:
            for nb in st.neighbours(state):
                if nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


def growth_ratios(sizes: Sequence[int]) -> List[float]:
    return [b / a for a, b in zip(sizes, sizes[1:])]


# --- decay fitting -------------------------------------------------------------

@dataclass(frozen=True)
class DecayFit:
    t: Tuple[float, ...]
    p: Tuple[float, ...]
    beta: float
    beta_stderr: float
    intercept: float
    residuals: Tuple[float, ...]
    r_squared: float

    POOR_FIT_R2 = 0.999

    @property
    def poor_fit(self) -> bool:
        return self.r_squared < self.POOR_FIT_R2


def decay_fit(returns: Sequence[Tuple[float, float]]) -> DecayFit:
    """Least-squares slope of log(-log p_2t) against log t.

    Only points with 0 < p_2t < 1 and t > 0 enter the fit.
    """
    pts = [(float(t), float(p)) for t, p in returns if t > 0 and 0 < p < 1]
    if not any(float(p) > 0 for _, p in returns):
        raise InvalidParameter("all return probabilities are zero")
    if len(pts) < 4:
        raise InvalidParameter("decay_fit needs at least 4 points with 0 < p < 1")
    ts = np.array([t for t, _ in pts])
    ps = np.array([p for _, p in pts])
    x = np.log(ts)
    y = np.log(-np.log(ps))
    (beta, c), cov = np.polyfit(x, y, 1, cov="unscaled")
    resid = y - (beta * x + c)
    dof = len(x) - 2
    s2 = float(resid @ resid) / dof if dof > 0 else 0.0
    stderr = math.sqrt(max(cov[0, 0] * s2, 0.0))
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(tuple(ts), tuple(ps), float(beta), stderr, float(c), tuple(resid), r2)
