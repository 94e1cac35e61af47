"""Return probabilities and ball growth for the simple random walk on G_2 = BS(1,2).

Run: python demos/random_walk.py
"""
from kappa_solenoid.exactalg import Algebraic, normalize_poly
from kappa_solenoid.walk import (
    ball_sizes,
    decay_fit,
    exact_return_curve,
    growth_ratios,
    mc_return_curve,
    z2_control,
)

bs2 = Algebraic(normalize_poly([-2, 1]))

# Exact path counting: every probability below is a rational number.
exact = exact_return_curve(bs2, 10)
print("exact p_n(e):", [str(p) for p in exact])

# Monte Carlo with a fixed seed agrees with the exact values to within sampling error.
mc = mc_return_curve(bs2, 10, samples=200_000, seed=7)
for est, p in zip(mc, exact):
    lo, hi = est.ci95
    print(f"n={est.t:<3} exact {float(p):.5f}  estimate {est.estimate:.5f}  95% interval [{lo:.5f}, {hi:.5f}]")

# Exponential growth of balls separates BS(1,2) from the polynomial-growth control Z^2.
print("BS(1,2) ball ratios:", [round(r, 3) for r in growth_ratios(ball_sizes(bs2, 10))])
print("Z^2 ball ratios:   ", [round(r, 3) for r in growth_ratios(ball_sizes(z2_control(), 10))])

# A decay fit at this horizon gives an honest local slope, flagged when the fit is poor.
# It is not an estimate of the asymptotic exponent.
fit = decay_fit([(n // 2, float(exact[n])) for n in range(2, 11, 2)])
print(f"local slope {fit.beta:.3f} +- {fit.beta_stderr:.3f}, R^2 {fit.r_squared:.4f}, poor fit: {fit.poor_fit}")
