"""
Poisson tails and their large-deviation bound
=============================================

The mass of Poisson(v) below (1 - lambda) v decays like exp(-v Q(1 - lambda))
with Q(u) = u log u - u + 1, up to a 1/(lambda sqrt v) factor. We check the
ratio stays bounded and compare against a 128-bit reference.
"""

from shifted_primes.asymptotics import poisson_partial, poisson_partial_mp, poisson_rate
from shifted_primes.registry import poisson_lambda_grid

print("Q(2) =", poisson_rate(2.0))
print(f"\n{'v':>5} {'lambda':>7} {'side':>11} {'tail':>11} {'tail/bound':>10} {'rel.err':>9}")
for v in (10.0, 100.0, 400.0):
    for lam in poisson_lambda_grid(v, 3):
        for side in ("lower_tail", "upper_tail"):
            t = poisson_partial(v, lam, side)
            ref = poisson_partial_mp(v, lam, side)
            err = abs(t.exact_sum - ref) / ref
            print(f"{v:>5.0f} {lam:>7.3f} {side:>11} {t.exact_sum:>11.3e} {t.exact_sum / t.bound:>10.4f} {err:>9.1e}")
