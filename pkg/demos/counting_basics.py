"""
Counting multiples of shifted primes
====================================

N(x, y) counts the n <= x that some p - 1 divides, with p prime and p > y.
This walk-through computes it three ways and brackets it from both sides.
"""

from shifted_primes.counting import brute_N, exact_N, mertens_upper, moments, r_counts

# The smallest case by hand: p - 1 in {2, 4, 6, 10} for p in {3, 5, 7, 11},
# and their multiples up to 10 are 2, 4, 6, 8, 10.
print("N(10, 2) =", exact_N(10, 2))
print("r(n) for n <= 10:", r_counts(10, 2).as_dict())

# The sieve marks multiples segment by segment. The brute oracle checks every
# n on its own by walking its divisors. They must agree exactly.
for x, y in [(10**4, 10), (10**5, 300), (10**6, 1000)]:
    print(f"x={x:>8} y={y:>5}  sieve={exact_N(x, y):>7}  brute={brute_N(x, y):>7}")

# Between the moment lower bound and the Mertens upper bound
x = 10**7
print(f"\n{'y':>8} {'M1^2/M2':>10} {'N':>9} {'sum x/(p-1)':>12}")
for y in (10, 10**3, 10**5, x // 10, x // 2):
    m = moments(x, y)
    print(f"{y:>8} {m.lower_cs_float:>10.0f} {exact_N(x, y):>9} {mertens_upper(x, y):>12}")

# Once y is close to x, the first moment overcounts almost nothing and all
# three numbers meet. For small y, multiples of different p - 1 overlap
# heavily and the upper bound is far off.

# At y = 2 every p - 1 is even and p = 3 contributes d = 2, so N is exactly
# the even numbers. At y = 1, d = 1 comes in and N = x.
print("\nN(x, 2) / x =", exact_N(x, 2) / x, "  N(x, 1) / x =", exact_N(x, 1) / x)
