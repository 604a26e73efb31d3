"""Prime tables, smallest-prime-factor tables and anatomy statistics.

Everything here is exact integer work backed by numpy. Tables are built once
and marked read-only so they can be shared between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

DEFAULT_SEGMENT = 1 << 24


class InvalidRangeError(ValueError):
    pass


class TableTooSmallError(ValueError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    """Plain Eratosthenes up to a small limit (used to seed segments)."""
    if limit < 2:
        return _frozen(np.zeros(0, dtype=np.int64))
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return _frozen(np.flatnonzero(flags).astype(np.int64))


def _segment_flags(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primality flags for the integers lo..hi inclusive."""
    flags = np.ones(hi - lo + 1, dtype=bool)
    if lo <= 1:
        flags[: 2 - lo] = False
    for p in base:
        p = int(p)
        if p * p > hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo :: p] = False
    return flags


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes in the closed interval [lo, hi], ascending."""

    lo: int
    hi: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)

    def tolist(self) -> list[int]:
        return self.primes.tolist()


def primes_in_range(lo: int, hi: int, segment: int = DEFAULT_SEGMENT) -> PrimeTable:
    """Segmented sieve of Eratosthenes over [lo, hi].

    The output does not depend on ``segment``; it only bounds the size of
    the working flag array.
    """
    if lo < 2 or hi < lo:
        raise InvalidRangeError(f"need 2 <= lo <= hi, got lo={lo}, hi={hi}")
    if segment < 1:
        raise ValueError("segment must be positive")
    base = _base_primes(math.isqrt(hi))
    chunks = []
    start = lo
    while start <= hi:
        stop = min(hi, start + segment - 1)
        flags = _segment_flags(start, stop, base)
        chunks.append(np.flatnonzero(flags).astype(np.int64) + start)
        start = stop + 1
    primes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return PrimeTable(lo, hi, _frozen(primes))


@lru_cache(maxsize=16)
def primes_upto(n: int) -> np.ndarray:
    """Read-only array of all primes <= n (empty if n < 2)."""
    if n < 2:
        return _frozen(np.zeros(0, dtype=np.int64))
    return primes_in_range(2, n).primes


@lru_cache(maxsize=8)
def prime_flags(n: int) -> np.ndarray:
    """Boolean array ``f`` of length n+1 with ``f[k]`` true iff k is prime."""
    flags = np.zeros(n + 1, dtype=bool)
    flags[primes_upto(n)] = True
    return _frozen(flags)


class Factorization(NamedTuple):
    n: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, a in self.factors:
            out *= p**a
        return out


@dataclass(frozen=True, eq=False)
class SpfTable:
    """Smallest prime factor of every n in [2, limit], as a flat int32 array.

    ``spf[0]`` and ``spf[1]`` are stored as 0 and 1.
    """

    limit: int
    spf: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, limit: int) -> "SpfTable":
        if limit < 2:
            raise ValueError("limit must be >= 2")
        if limit > 2_000_000_000:
            raise TableTooSmallError("SpfTable is capped at 2e9 entries (int32)")
        spf = np.zeros(limit + 1, dtype=np.int32)
        for p in _base_primes(math.isqrt(limit)):
            p = int(p)
            view = spf[p * p :: p]
            view[view == 0] = p
        spf[1] = 1
        untouched = np.flatnonzero(spf == 0)
        spf[untouched] = untouched
        spf[0] = 0
        return cls(limit, _frozen(spf))

    def __getitem__(self, n):
        return self.spf[n]

    def check(self, n: int) -> None:
        if n <= 0:
            raise ValueError(f"n must be positive, got {n}")
        if n > self.limit:
            raise TableTooSmallError(f"n={n} exceeds table limit {self.limit}")


_shared_spf: SpfTable | None = None


def spf_table(limit: int) -> SpfTable:
    """Shared table covering at least [2, limit]; rebuilt only to grow."""
    global _shared_spf
    if _shared_spf is None or _shared_spf.limit < limit:
        size = max(limit, 2)
        if _shared_spf is not None:
            size = max(size, min(2 * _shared_spf.limit, 1 << 27))
        _shared_spf = SpfTable.build(size)
    return _shared_spf


def factorize(n: int, spf: SpfTable) -> Factorization:
    spf.check(n)
    original = n
    factors = []
    while n > 1:
        p = int(spf.spf[n])
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        factors.append((p, a))
    return Factorization(original, tuple(factors))


class OmegaStats(NamedTuple):
    small_omega: int
    big_omega: int
    omega_upto_z: int
    omega_star_upto_z: int
    largest: int
    smallest: float


def omega_stats(n: int, z: int, spf: SpfTable) -> OmegaStats:
    """Prime-factor statistics of n with cutoff z.

    ``omega_upto_z`` counts prime factors p <= z with multiplicity, and
    ``omega_star_upto_z`` does the same for odd p <= z. For n = 1 the largest
    prime factor is 1 and the smallest is ``inf``.
    """
    fac = factorize(n, spf).factors
    return OmegaStats(
        small_omega=len(fac),
        big_omega=sum(a for _, a in fac),
        omega_upto_z=sum(a for p, a in fac if p <= z),
        omega_star_upto_z=sum(a for p, a in fac if 2 < p <= z),
        largest=fac[-1][0] if fac else 1,
        smallest=fac[0][0] if fac else math.inf,
    )


def euler_phi(n: int, spf: SpfTable) -> int:
    out = n
    for p, _ in factorize(n, spf).factors:
        out = out // p * (p - 1)
    return out


# Whole-range arrays. Index k of each array holds the value for the integer k;
# index 0 is meaningless filler.


@lru_cache(maxsize=16)
def omega_array(limit: int, z: int | None = None, star: bool = False) -> np.ndarray:
    """Omega(n, z) for 0 <= n <= limit (Omega*(n, z) when ``star``).

    ``z=None`` means no cutoff, i.e. the full Omega(n).
    """
    cut = limit if z is None else min(z, limit)
    out = np.zeros(limit + 1, dtype=np.int16)
    for p in primes_upto(cut):
        p = int(p)
        if star and p == 2:
            continue
        q = p
        while q <= limit:
            out[q::q] += 1
            q *= p
    return _frozen(out)


@lru_cache(maxsize=4)
def distinct_omega_array(limit: int) -> np.ndarray:
    out = np.zeros(limit + 1, dtype=np.int16)
    for p in primes_upto(limit):
        out[int(p) :: int(p)] += 1
    return _frozen(out)


@lru_cache(maxsize=4)
def phi_array(limit: int) -> np.ndarray:
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in primes_upto(limit):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    return _frozen(phi)


@lru_cache(maxsize=4)
def largest_factor_array(limit: int) -> np.ndarray:
    """P+(n) for 0 <= n <= limit with the convention P+(1) = 1."""
    spf = spf_table(max(limit, 2)).spf[: limit + 1]
    out = np.ones(limit + 1, dtype=np.int64)
    out[0] = 0
    rem = np.arange(limit + 1, dtype=np.int64)
    live = np.flatnonzero(rem > 1)
    while live.size:
        p = spf[rem[live]].astype(np.int64)
        out[live] = p
        rem[live] //= p
        live = live[rem[live] > 1]
    return _frozen(out)


def count_smooth(x: int, y: int) -> int:
    """#{1 <= n <= x : P+(n) <= y}, n = 1 included."""
    if x < 1:
        return 0
    if y >= x:
        return x
    return int(np.count_nonzero(largest_factor_array(x)[1:] <= y))


def count_rough(x: int, z: int) -> int:
    """#{1 <= n <= x : P-(n) > z}, n = 1 included."""
    if x < 1:
        return 0
    if z >= x:
        return 1
    spf = spf_table(max(x, 2)).spf
    return 1 + int(np.count_nonzero(spf[2 : x + 1] > z))
