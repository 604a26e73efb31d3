"""
How many prime factors?
=======================

Omega(n) is close to Poisson with mean log log x. The sieve arrays make the
whole distribution cheap to tabulate, and the restricted counts Omega(n, z)
give the same picture for primes up to z.
"""

import math

import numpy as np

from shifted_primes.lemma_lab import selberg_ratio, timofeev_all_counts
from shifted_primes.sieve_core import factorize, omega_array, spf_table

print("360 =", " * ".join(f"{p}^{e}" for p, e in factorize(360, spf_table(1000)).factors))

x = 10**6
om = omega_array(x)[1:]
counts = np.bincount(om)
mean = math.log(math.log(x))
print(f"\nOmega(n) for n <= {x}, log log x = {mean:.3f}")
for k, c in enumerate(counts[:9]):
    print(f"k={k}  share={c / x:.4f}  sum 1/n over the class vs (loglog x)^k/k!: {selberg_ratio(x, k).ratio:.3f}")

# Shifted primes p - 1 carry more small factors than typical integers do:
# 2 always divides them.
z = 1000
hist = timofeev_all_counts(x, z)
total = sum(hist.values())
avg = sum(m * c for m, c in hist.items()) / total
print(f"\nprimes p <= {x}: {total}; mean Omega(p - 1, {z}) = {avg:.3f} vs log log z = {math.log(math.log(z)):.3f}")
