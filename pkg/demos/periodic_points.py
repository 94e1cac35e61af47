"""Periodic characters, entropy, and what they can and cannot tell apart.

Run: python demos/periodic_points.py
"""
import math

from kappa_solenoid.dynamics import classify, entropy, entropy_growth_check, fixed_count, least_period_count
from kappa_solenoid.exactalg import Transcendental, normalize_poly

# A parameter a is encoded by the minimal integer polynomial it satisfies.
# For a = 2 that is x - 2; for the golden ratio it is x^2 - x - 1.
two = normalize_poly([-2, 1])
golden = normalize_poly([-1, -1, 1])

print("q   c_q(x-2)   least-period(x-2)   c_q(x^2-x-1)")
for q in range(1, 9):
    print(f"{q:<3} {fixed_count(two, q):<10} {least_period_count(two, q):<19} {fixed_count(golden, q)}")

# The counts grow like exp(q h). Compare the certified entropy with the growth rate at q = 20.
for name, poly in (("x-2", two), ("x^2-x-1", golden)):
    rep = entropy(poly)
    rate = math.log(fixed_count(poly, 20)) / 20
    print(f"{name}: entropy {rep.value:.12f} (error <= {rep.error_bound:.1e}), log(c_20)/20 = {rate:.6f}")

table = entropy_growth_check(golden, 12)
for q, c, rate in table.rows[-3:]:
    print(f"  q = {q}: c_q = {c}, log(c_q)/q = {rate:.6f}")
# The conjugate root -1/phi makes c_q alternate around phi^q, so the deviation oscillates while it shrinks.
print(f"  largest deviation for q >= 7: {max(table.deviations[6:]):.2e}")

# a = 2 and a = 1/2 have reciprocal polynomials, so every periodic count agrees.
# The invariants here cannot separate them; the verdict says so instead of guessing.
polys = {"x-2": two, "x-3": normalize_poly([-3, 1]), "2x-1": normalize_poly([-1, 2])}
for left, right in (("x-2", "x-3"), ("x-2", "2x-1")):
    v = classify(polys[left], polys[right])
    print(f"{left} vs {right}: {v.outcome}", f"(witness q = {v.witness_q})" if v.witness_q else "", *v.notes)

# A transcendental parameter has infinite entropy, so it never matches an algebraic one.
print("x-2 vs transcendental:", classify(two, Transcendental()).outcome)
