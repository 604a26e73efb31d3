"""Exact N(x, y), the representation function r(n) and its moments.

N(x, y) counts n <= x having a divisor d = p - 1 with p > y prime. The fast
path marks multiples of every such d in fixed-size segments of [1, x]; the
oracle path goes the other way round and enumerates the divisors of each n.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numba
import numpy as np

from .sieve_core import (
    omega_array,
    prime_flags,
    primes_in_range,
    spf_table,
)

DEFAULT_SEGMENT = 1 << 25
BRUTE_CAP = 10**6
SPARSE_CAP = 10**8
MEMORY_ENV = "SHIFTED_PRIMES_MEMORY_BUDGET"
DEFAULT_MEMORY_BUDGET = 3 << 30


class ResourceBudgetError(RuntimeError):
    pass


def memory_budget() -> int:
    """Byte budget for one computation; overridable through the environment."""
    raw = os.environ.get(MEMORY_ENV)
    return int(float(raw)) if raw else DEFAULT_MEMORY_BUDGET


def _check_budget(x: int, segment: int) -> None:
    # int64 divisor list (~1.1 x / log x entries) plus one flag/count segment
    est = 9 * x / max(math.log(x), 1.0) + 2 * min(segment, x)
    budget = memory_budget()
    if est > budget:
        raise ResourceBudgetError(
            f"x={x} needs about {est / 2**20:.0f} MiB, budget is {budget / 2**20:.0f} MiB "
            f"(set {MEMORY_ENV} to raise it)"
        )


@dataclass(frozen=True, eq=False)
class DivisorSet:
    """Every d = p - 1 <= x with p prime and p > y, ascending."""

    x: int
    y: int
    divisors: np.ndarray

    def __len__(self) -> int:
        return len(self.divisors)


@lru_cache(maxsize=2)
def _primes_to(n: int) -> np.ndarray:
    return primes_in_range(2, n).primes


def divisor_set(x: int, y: float) -> DivisorSet:
    lo = max(2, math.floor(y) + 1)
    if lo > x + 1:
        return DivisorSet(x, y, np.zeros(0, dtype=np.int64))
    p = _primes_to(x + 1)
    return DivisorSet(x, y, p[np.searchsorted(p, lo) :] - 1)


def _mark(lo: int, hi: int, divisors: np.ndarray, out: np.ndarray, add: bool) -> None:
    """Mark (or count) multiples of each divisor inside [lo, hi].

    ``out[k]`` stands for the integer lo + k. Small divisors are handled one
    at a time with strided slices; large ones are handled one cofactor j at a
    time, where the positions d * j are distinct so fancy indexing is safe.
    """
    if divisors.size == 0:
        return
    cut = max(math.isqrt(hi), 1)
    n_small = int(np.searchsorted(divisors, cut, side="right"))
    for d in divisors[:n_small].tolist():
        start = -(-lo // d) * d
        if start > hi:
            continue
        if add:
            out[start - lo :: d] += 1
        else:
            out[start - lo :: d] = True
    large = divisors[n_small:]
    if large.size == 0:
        return
    for j in range(1, hi // int(large[0]) + 1):
        a = int(np.searchsorted(large, -(-lo // j), side="left"))
        b = int(np.searchsorted(large, hi // j, side="right"))
        if a >= b:
            continue
        idx = large[a:b] * j - lo
        if add:
            out[idx] += 1
        else:
            out[idx] = True


def _segments(x: int, segment: int) -> list[tuple[int, int]]:
    return [(lo, min(x, lo + segment - 1)) for lo in range(1, x + 1, segment)]


def _map_segments(fn: Callable, x: int, segment: int, threads: int) -> list:
    parts = _segments(x, segment)
    if threads <= 1 or len(parts) == 1:
        return [fn(lo, hi) for lo, hi in parts]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: fn(*s), parts))


def exact_N(x: int, y: int, segment: int = DEFAULT_SEGMENT, threads: int = 1) -> int:
    """N(x, y) by marking multiples of the shifted primes p - 1 > y - 1.

    The result is identical for every ``segment`` and ``threads`` value.
    """
    if x < 1:
        return 0
    _check_budget(x, segment)
    divs = divisor_set(x, y).divisors

    def count(lo: int, hi: int) -> int:
        flags = np.zeros(hi - lo + 1, dtype=bool)
        _mark(lo, hi, divs, flags, add=False)
        return int(np.count_nonzero(flags))

    return sum(_map_segments(count, x, segment, threads))


@numba.njit(cache=True)
def _brute_count(x, y, spf, is_prime):
    divs = np.empty(4096, dtype=np.int64)
    total = 0
    for n in range(1, x + 1):
        nd = 1
        divs[0] = 1
        m = n
        while m > 1:
            p = spf[m]
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            cur = nd
            pk = 1
            for _ in range(a):
                pk *= p
                for i in range(cur):
                    divs[nd] = divs[i] * pk
                    nd += 1
        for i in range(nd):
            d = divs[i]
            if d + 1 > y and is_prime[d + 1]:
                total += 1
                break
    return total


def brute_N(x: int, y: int) -> int:
    """Oracle for N(x, y): enumerate the divisors of every n <= x."""
    if x > BRUTE_CAP:
        raise ResourceBudgetError(f"brute_N refuses x={x} > {BRUTE_CAP}")
    if x < 1:
        return 0
    spf = spf_table(max(x, 2)).spf
    flags = prime_flags(x + 1)
    return int(_brute_count(x, y, spf, flags))


def nu(x: float, y: float) -> float:
    """Sum of 1/(p - 1) over primes y < p <= x."""
    lo, hi = max(2, math.floor(y) + 1), math.floor(x)
    if hi < lo:
        return 0.0
    p = primes_in_range(lo, hi).primes
    return math.fsum((1.0 / (p - 1)).tolist())


def mertens_upper(x: int, y: int) -> int:
    """Sum of floor(x / (p - 1)) over primes p > y with p - 1 <= x."""
    divs = divisor_set(x, y).divisors
    return int(np.sum(x // divs)) if divs.size else 0


@dataclass(frozen=True)
class CaseASplit:
    """Require m = k h with k <= k_max and every prime factor of h above h_rough.

    With k_max <= h_rough the split is unique: k is the h_rough-smooth part of m.
    """

    k_max: int
    h_rough: int

    def __post_init__(self):
        if self.k_max > self.h_rough:
            raise ValueError("k_max must not exceed h_rough (split would be ambiguous)")


@dataclass(frozen=True)
class RepresentationConstraints:
    """Filters on the pairs (p, m) counted by r(n), n = (p - 1) m.

    ``cap_mode="joint"`` requires Omega((p - 1) m, z) <= w_cap.
    ``cap_mode="separate"`` requires Omega(m) <= w_cap and Omega(p - 1, z) <= w_cap.
    ``p_window=(lo, hi)`` keeps primes with lo < p < hi (on top of p > y).
    """

    w_cap: int | None = None
    z: int | None = None
    p_window: tuple[float, float] | None = None
    case_a_split: CaseASplit | None = None
    cap_mode: str = "joint"

    def __post_init__(self):
        if self.w_cap is not None and self.z is None:
            raise ValueError("w_cap needs a cutoff z")
        if self.cap_mode not in ("joint", "separate"):
            raise ValueError(f"unknown cap_mode {self.cap_mode!r}")

    @property
    def unconstrained(self) -> bool:
        return self.w_cap is None and self.p_window is None and self.case_a_split is None

    @classmethod
    def case_a(cls, y: float, w_cap: int, z: int) -> "RepresentationConstraints":
        """Small-y construction: y < p < y^1.1, m = k h, k <= y^0.1, P-(h) > y^1.1."""
        return cls(
            w_cap=w_cap,
            z=z,
            p_window=(y, y**1.1),
            case_a_split=CaseASplit(math.floor(y**0.1), math.floor(y**1.1)),
        )


NO_CONSTRAINTS = RepresentationConstraints()


@dataclass(frozen=True, eq=False)
class RepresentationCounts:
    """Sparse r(n): parallel arrays of the n with r(n) > 0 and their counts."""

    x: int
    y: int
    n: np.ndarray
    r: np.ndarray

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.n.tolist(), self.r.tolist()))

    def __len__(self) -> int:
        return len(self.n)


def _smooth_part_array(limit: int, bound: int) -> np.ndarray:
    """Largest divisor of n built from primes <= bound, for 0 <= n <= limit."""
    spf = spf_table(max(limit, 2)).spf
    out = np.ones(limit + 1, dtype=np.int64)
    rem = np.arange(limit + 1, dtype=np.int64)
    live = np.flatnonzero(rem > 1)
    while live.size:
        p = spf[rem[live]].astype(np.int64)
        keep = p <= bound
        live, p = live[keep], p[keep]
        out[live] *= p
        rem[live] //= p
        live = live[rem[live] > 1]
    return out


def _filtered_divisors(x: int, y: int, c: RepresentationConstraints) -> np.ndarray:
    divs = divisor_set(x, y).divisors
    if c.p_window is not None:
        lo, hi = c.p_window
        p = divs + 1
        divs = divs[(p > lo) & (p < hi)]
    return divs


def _admissibility(x: int, c: RepresentationConstraints) -> Callable | None:
    """Vectorised predicate ``ok(d, m)`` for the constrained pair count."""
    if c.w_cap is None and c.case_a_split is None:
        return None
    tests = []
    if c.w_cap is not None:
        omz = omega_array(x, c.z)
        w = c.w_cap
        if c.cap_mode == "joint":
            tests.append(lambda d, m: omz[d] + omz[m] <= w)
        else:
            om = omega_array(x)
            tests.append(lambda d, m: (om[m] <= w) & (omz[d] <= w))
    if c.case_a_split is not None:
        smooth = _smooth_part_array(x, c.case_a_split.h_rough)
        k_max = c.case_a_split.k_max
        tests.append(lambda d, m: smooth[m] <= k_max)

    def ok(d, m):
        out = tests[0](d, m)
        for t in tests[1:]:
            out = out & t(d, m)
        return np.broadcast_to(out, np.broadcast(d, m).shape)

    return ok


def _pair_counts(x: int, divs: np.ndarray, ok: Callable | None) -> np.ndarray:
    """r(n) for 0 <= n <= x, generated from pairs (d, m) with d m <= x."""
    counts = np.zeros(x + 1, dtype=np.uint16)
    if divs.size == 0:
        return counts
    cut = math.isqrt(x)
    n_small = int(np.searchsorted(divs, cut, side="right"))
    for d in divs[:n_small].tolist():
        m = np.arange(1, x // d + 1)
        if ok is not None:
            m = m[ok(d, m)]
        counts[d * m] += 1
    large = divs[n_small:]
    if large.size:
        for m in range(1, x // int(large[0]) + 1):
            d = large[: int(np.searchsorted(large, x // m, side="right"))]
            if ok is not None:
                d = d[ok(d, m)]
            counts[d * m] += 1
    return counts


def r_counts(x: int, y: int, c: RepresentationConstraints = NO_CONSTRAINTS) -> RepresentationCounts:
    """Number of admissible factorisations n = (p - 1) m for every n <= x."""
    if x > SPARSE_CAP:
        raise ResourceBudgetError(f"r_counts holds at most {SPARSE_CAP} entries, got x={x}")
    _check_budget(3 * x, 0)
    counts = _pair_counts(x, _filtered_divisors(x, y, c), _admissibility(x, c))
    n = np.flatnonzero(counts)
    return RepresentationCounts(x, y, n, counts[n].astype(np.int64))


@dataclass(frozen=True)
class MomentReport:
    M1: int
    M2: int
    M2_prime: int
    lower_ie: int
    lower_cs: Fraction
    n_with_r_positive: int

    @property
    def lower_cs_float(self) -> float:
        return float(self.lower_cs)

    @classmethod
    def from_sums(cls, m1: int, m2: int, positive: int) -> "MomentReport":
        m2p = m2 - m1
        cs = Fraction(m1 * m1, m2) if m2 else Fraction(0)
        return cls(m1, m2, m2p, m1 - m2p, cs, positive)


def moments(
    x: int,
    y: int,
    c: RepresentationConstraints = NO_CONSTRAINTS,
    segment: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> MomentReport:
    """M1 = sum r(n), M2 = sum r(n)^2 and the two lower bounds for N(x, y).

    Without constraints r(n) is computed segment by segment, so x is limited
    only by the memory budget for the divisor list.
    """
    if not c.unconstrained:
        rc = r_counts(x, y, c)
        r = rc.r
        return MomentReport.from_sums(int(r.sum()), int((r * r).sum()), len(rc))
    if x < 1:
        return MomentReport.from_sums(0, 0, 0)
    _check_budget(x, 2 * segment)
    divs = divisor_set(x, y).divisors

    def sums(lo: int, hi: int) -> tuple[int, int, int]:
        cnt = np.zeros(hi - lo + 1, dtype=np.uint16)
        _mark(lo, hi, divs, cnt, add=True)
        r = cnt.astype(np.int64)
        return int(r.sum()), int((r * r).sum()), int(np.count_nonzero(r))

    parts = _map_segments(sums, x, segment, threads)
    return MomentReport.from_sums(*(sum(col) for col in zip(*parts)))
