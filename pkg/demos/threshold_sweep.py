"""
Sweeping y across the threshold
===============================

The order of N(x, y) changes shape as y moves from small powers of x up to
x / 2. We parametrise y = x / exp((log x)^alpha) and compare exact counts with
the predicted order (implied constants set to 1).
"""

import math

from shifted_primes.asymptotics import ALPHA_THRESHOLD, predict_order, shape_params, y_from_alpha
from shifted_primes.counting import exact_N

x = 10**7
print(f"threshold alpha = 1/log 4 = {ALPHA_THRESHOLD:.4f}\n")
print(f"{'alpha':>5} {'y':>9} {'x/y':>8} {'branch':>6} {'N':>9} {'N/pred':>7}")
for alpha in (0.1, 0.2, 0.3, 0.5, 0.6, 0.7, 0.8, 0.9):
    y = y_from_alpha(x, alpha)
    if y < 2:
        continue
    pred = predict_order(x, y)
    n = exact_N(x, y)
    print(f"{alpha:>5} {y:>9.0f} {x / y:>8.1f} {pred.branch:>6} {n:>9} {n / pred.value:>7.3f}")

# Near alpha = 1/log 4 more than one branch applies; all of them are reported.
sp = shape_params(x, y_from_alpha(x, ALPHA_THRESHOLD))
print("\nbranches at the threshold:", sp.branches, " theta =", round(sp.theta, 12))

# The large-alpha asymptotic x log(x/y) / log x needs x/y to grow. At fixed
# x, shrinking alpha shrinks x/y, and the floors x // (p - 1) keep the ratio
# well below 1.
for alpha in (0.1, 0.2, 0.3):
    y = y_from_alpha(x, alpha)
    r = exact_N(x, y) * math.log(x) / (x * math.log(x / y))
    print(f"alpha={alpha}: x/y = {x / y:5.2f}, N log x / (x log(x/y)) = {r:.4f}")
