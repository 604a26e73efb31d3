"""Independent oracles: plain trial division, no numpy, no sieving."""

from __future__ import annotations

import math


def td_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def td_is_prime(n: int) -> bool:
    return n >= 2 and td_factor(n) == {n: 1}


def td_phi(n: int) -> int:
    r = n
    for p in td_factor(n):
        r = r // p * (p - 1)
    return r


def td_big_omega(n: int, z: float = math.inf) -> int:
    return sum(e for p, e in td_factor(n).items() if p <= z)


def td_N(x: int, y: float) -> int:
    """Count n <= x with some prime p > y, (p - 1) | n, by scanning divisors."""
    count = 0
    for n in range(1, x + 1):
        d = 1
        while d * d <= n:
            if n % d == 0 and any(td_is_prime(e + 1) and e + 1 > y for e in (d, n // d)):
                count += 1
                break
            d += 1
    return count


def smooth_numbers(primes: list[int], limit: int) -> list[int]:
    """Every n <= limit whose prime factors all lie in ``primes``."""
    out = [1]
    for p in primes:
        grown = []
        for n in out:
            m = n * p
            while m <= limit:
                grown.append(m)
                m *= p
        out += grown
    return sorted(out)

