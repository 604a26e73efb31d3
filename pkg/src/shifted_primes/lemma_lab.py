"""Both sides of each anatomy / sieve bound used in the lower-bound argument.

Every operation computes an exact left side at desk scale and the bound
expression with implied constant 1, and returns a :class:`RatioReport`.
Infinite sums over smooth numbers are multiplicative, so they are evaluated
exactly from truncated Euler-product power series; direct truncated scans are
kept alongside as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import asymptotics
from .asymptotics import loglog, poisson_rate
from .sieve_core import (
    count_rough,
    count_smooth,
    distinct_omega_array,
    largest_factor_array,
    omega_array,
    phi_array,
    prime_flags,
    primes_upto,
    spf_table,
)

LEMMA_IDS = (
    "selberg",
    "halasz_count",
    "halasz_recip",
    "hall_lower",
    "timofeev_upper",
    "timofeev_lower",
    "recip",
    "cct",
    "poisson",
    "tails",
    "sumphi",
    "smooth",
    "rough",
    "primecor_single",
    "primecor_pair",
    "bigsum_i",
    "bigsum_ii",
)

DIRECTIONS = ("upper", "lower", "two_sided")

# slack in the "(2 - delta) loglog" style ranges
RANGE_DELTA = 0.1


class LemmaDomainError(ValueError):
    pass


@dataclass
class RatioReport:
    lemma_id: str
    params: dict[str, Any]
    lhs: float
    rhs: float
    direction: str
    in_range: bool = True
    notes: list[str] = field(default_factory=list)
    extra: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.lemma_id not in LEMMA_IDS:
            raise ValueError(f"unknown lemma id {self.lemma_id!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return math.inf if self.lhs > 0 else 0.0
        return self.lhs / self.rhs

    def as_dict(self) -> dict[str, Any]:
        return {
            "lemma_id": self.lemma_id,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "direction": self.direction,
            "in_range": self.in_range,
            "notes": list(self.notes),
            "extra": dict(self.extra),
        }


def _table_size(x: int) -> int:
    # share whole-range arrays between nearby x values
    return max(10 ** math.ceil(math.log10(max(x, 10))), 10**4)


def _omega(x: int, z: int | None = None, star: bool = False) -> np.ndarray:
    size = _table_size(x)
    return omega_array(size, z, star)[: x + 1]


def _poisson_weight(mean: float, k: int) -> float:
    return mean**k / math.factorial(k)


def _check(cond: bool, report_notes: list[str], msg: str) -> bool:
    if not cond:
        report_notes.append(msg)
    return cond


def selberg_ratio(x: int, k: int) -> RatioReport:
    """sum_{n <= x, Omega(n) = k} 1/n against (loglog x)^k / k!."""
    notes: list[str] = []
    ok = _check(x >= 4, notes, "needs x >= 4")
    ok &= _check(0 <= k <= (2 - RANGE_DELTA) * loglog(max(x, 4)), notes, "k outside [0, 1.9 loglog x]")
    om = _omega(x)
    n = np.flatnonzero(om[1:] == k) + 1
    lhs = float(np.sum(1.0 / n)) if n.size else 0.0
    rhs = _poisson_weight(loglog(x), k) if x > math.e else math.nan
    return RatioReport("selberg", {"x": x, "k": k}, lhs, rhs, "two_sided", ok, notes)


def _halasz_range(x: int, z: int, m: int, star: bool, notes: list[str]) -> bool:
    ok = _check(x >= z >= 3, notes, "needs x >= z >= 3")
    top = (3 if star else 2) - RANGE_DELTA
    ok &= _check(0 <= m <= top * loglog(z), notes, f"m outside [0, {top} loglog z]")
    return ok


def halasz_counts(x: int, z: int, m: int, star: bool = False, mode: str = "count") -> RatioReport:
    """Integers n <= x with Omega(n, z) = m (Omega* when ``star``).

    ``mode="count"`` compares the count with x (loglog z)^m / (m! log z);
    ``mode="recip_sum"`` compares sum 1/n with (log x/log z)(loglog z)^m / m!.
    """
    notes: list[str] = []
    ok = _halasz_range(x, z, m, star, notes)
    om = _omega(x, z, star)
    hit = np.flatnonzero(om[1:] == m) + 1
    params = {"x": x, "z": z, "m": m, "star": star}
    weight = _poisson_weight(loglog(z), m)
    if mode == "count":
        return RatioReport(
            "halasz_count", params, float(hit.size), x * weight / math.log(z), "upper", ok, notes
        )
    if mode == "recip_sum":
        lhs = float(np.sum(1.0 / hit)) if hit.size else 0.0
        rhs = math.log(x) / math.log(z) * weight
        return RatioReport("halasz_recip", params, lhs, rhs, "upper", ok, notes)
    raise LemmaDomainError(f"unknown mode {mode!r}")


def hall_lower(x: int, z: int, m: int) -> RatioReport:
    """#{n <= x : Omega(n, z) in {m, m+1}} against x (loglog z)^m / (m! log z), from below."""
    notes: list[str] = []
    ok = _check(x >= z >= 3, notes, "needs x >= z >= 3")
    llz = loglog(z)
    ok &= _check(RANGE_DELTA * llz <= m <= (2 - RANGE_DELTA) * llz, notes, "m outside [0.1, 1.9] loglog z")
    om = _omega(x, z)[1:]
    lhs = float(np.count_nonzero((om == m) | (om == m + 1)))
    rhs = x * _poisson_weight(llz, m) / math.log(z)
    return RatioReport("hall_lower", {"x": x, "z": z, "m": m}, lhs, rhs, "lower", ok, notes)


def _shifted_prime_omegas(x: int, z: int, star: bool) -> np.ndarray:
    p = primes_upto(x)
    return _omega(x, z, star)[p - 1]


def timofeev_counts(x: int, z: int, m: int, star: bool = False) -> RatioReport:
    """#{p <= x : Omega(p - 1, z) = m} against x (loglog z)^m / (m! log x log z)."""
    notes = ["the z threshold in this bound is an unspecified constant"]
    ok = _check(x >= z >= 3, notes, "needs x >= z >= 3")
    ok &= _check(0 <= m <= (2 - RANGE_DELTA) * loglog(z), notes, "m outside [0, 1.9 loglog z]")
    om = _shifted_prime_omegas(x, z, star)
    lhs = float(np.count_nonzero(om == m))
    rhs = x * _poisson_weight(loglog(z), m) / (math.log(x) * math.log(z))
    params = {"x": x, "z": z, "m": m, "star": star}
    return RatioReport("timofeev_upper", params, lhs, rhs, "upper", ok, notes)


def timofeev_lower(x: int, z: int, m: int) -> RatioReport:
    """#{p <= x : Omega(p - 1, z) in {m, m+1, m+2}}, from below."""
    notes = ["the z threshold in this bound is an unspecified constant"]
    ok = _check(x >= z >= 3, notes, "needs x >= z >= 3")
    llz = loglog(z)
    ok &= _check(RANGE_DELTA * llz <= m <= (2 - RANGE_DELTA) * llz, notes, "m outside [0.1, 1.9] loglog z")
    om = _shifted_prime_omegas(x, z, False)
    lhs = float(np.count_nonzero((om >= m) & (om <= m + 2)))
    rhs = x * _poisson_weight(llz, m) / (math.log(x) * math.log(z))
    return RatioReport("timofeev_lower", {"x": x, "z": z, "m": m}, lhs, rhs, "lower", ok, notes)


def timofeev_all_counts(x: int, z: int, star: bool = False) -> dict[int, int]:
    """Histogram m -> #{p <= x : Omega(p - 1, z) = m}."""
    om = _shifted_prime_omegas(x, z, star)
    vals, cnt = np.unique(om, return_counts=True)
    return dict(zip(vals.tolist(), cnt.tolist()))


# Euler-product power series: coefficient k of prod_p (1 + sum_j a_p(j) v^j)
# is the sum of f(n) over n with exactly k prime factors (with multiplicity).


def _series_product(primes: np.ndarray, term, degree: int) -> np.ndarray:
    """Truncated coefficients of prod_p (1 + sum_{j>=1} term(p, j) v^j)."""
    coef = np.zeros(degree + 1)
    coef[0] = 1.0
    j = np.arange(1, degree + 1)
    for p in primes.tolist():
        local = np.empty(degree + 1)
        local[0] = 1.0
        local[1:] = term(p, j)
        coef = np.convolve(coef, local)[: degree + 1]
    return coef


def recip_exact(x: int, z: int, k: int, xi: float = 0.0, c: float = 0.0) -> float:
    """sum over n with P+(n) <= x and Omega(n, z) = k of n^-(1-xi) (n/phi(n))^c.

    Primes up to z are tracked by degree; each prime in (z, x] contributes its
    full local factor 1 + g u / (1 - u) with u = p^-(1-xi), g = (p/(p-1))^c.
    """
    small = primes_upto(min(z, x))
    coef = _series_product(
        small, lambda p, j: (p / (p - 1)) ** c * np.exp(-(1 - xi) * j * math.log(p)), k
    )
    big = primes_upto(x)
    big = big[big > z].astype(float)
    u = big ** (-(1 - xi))
    g = (big / (big - 1)) ** c
    log_factor = float(np.sum(np.log1p(g * u / (1 - u))))
    return float(coef[k]) * math.exp(log_factor)


def recip_truncated(x: int, z: int, k: int, xi: float, c: float, n_max: int) -> float:
    """Direct scan of the same sum over n <= n_max (a lower bound for it)."""
    n = np.arange(1, n_max + 1)
    mask = (largest_factor_array(n_max)[1:] <= x) & (_omega(n_max, z)[1:] == k)
    n = n[mask]
    if n.size == 0:
        return 0.0
    phi = phi_array(_table_size(n_max))[n]
    vals = n.astype(float) ** (-(1 - xi)) * (n / phi) ** c
    return float(np.sum(vals))


def recip_weighted_sum(
    x: int, z: int, k: int, xi: float = 0.0, c: float = 0.0, n_max: int = 10**5
) -> RatioReport:
    notes: list[str] = []
    ok = _check(math.e**2 <= z <= x, notes, "needs e^2 <= z <= x")
    ok &= _check(0 <= k <= 1.8 * loglog(max(z, 3)), notes, "k above 1.8 loglog z")
    ok &= _check(0 <= xi <= 1 / (5 * math.log(x)) * (1 + 1e-12), notes, "xi outside [0, 1/(5 log x)]")
    ok &= _check(0 <= c <= 10, notes, "c outside [0, 10]")
    lhs = recip_exact(x, z, k, xi, c)
    partial = recip_truncated(x, z, k, xi, c, n_max)
    rhs = math.log(x) / math.log(z) * _poisson_weight(loglog(z), k)
    extra = {"truncated_sum": partial, "n_max": float(n_max), "tail": lhs - partial}
    params = {"x": x, "z": z, "k": k, "xi": xi, "c": c}
    return RatioReport("recip", params, lhs, rhs, "upper", ok, notes, extra)


def cct_count(x: int, q: int, a: int, k: int) -> RatioReport:
    """#{n <= x : n = a mod q, omega(n) <= k} against the hybrid Brun-Titchmarsh bound."""
    if math.gcd(a, q) != 1:
        raise LemmaDomainError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    if not 1 <= q < x:
        raise LemmaDomainError(f"need 1 <= q < x, got q={q}, x={x}")
    notes: list[str] = []
    first = a % q or q
    n = np.arange(first, x + 1, q)
    om = distinct_omega_array(_table_size(x))
    lhs = float(np.count_nonzero(om[n] <= k))
    t = 10 * x / q
    phi_q = int(phi_array(max(q, 2))[q]) if q > 1 else 1
    series = math.fsum(_poisson_weight(loglog(t), j) for j in range(k))
    rhs = x / (phi_q * math.log(t)) * series
    if k == 0:
        notes.append("k = 0 gives an empty bound sum")
    return RatioReport("cct", {"x": x, "q": q, "a": a, "k": k}, lhs, rhs, "upper", k > 0, notes)


def poisson_report(v: float, lambda_dev: float, side: str = "lower_tail") -> RatioReport:
    res = asymptotics.poisson_partial(v, lambda_dev, side)
    notes = [] if res.applicable else ["lambda outside [v^-1/2, 1/2]"]
    return RatioReport(
        "poisson",
        {"v": v, "lambda": lambda_dev, "side": side},
        res.exact_sum,
        res.bound,
        "two_sided",
        res.applicable,
        notes,
        {"window_sum": res.window_sum, "window_ratio": res.window_sum / res.bound},
    )


def tail_counts(x: int, z: int, lambda_dev: float, star: bool = False, range_delta: float = 0.05) -> RatioReport:
    """#{m <= x : Omega(m, z) >= (1 + lambda) loglog z} against the Poisson-tail bound."""
    notes: list[str] = []
    ok = _check(x >= z, notes, "needs x >= z")
    ok &= _check(0 < lambda_dev <= 1 - range_delta, notes, f"lambda outside (0, {1 - range_delta}]")
    if star:
        notes.append("range for the odd-prime variant read as a lambda range")
    llz = loglog(z)
    threshold = (1 + lambda_dev) * llz
    om = _omega(x, z, star)[1:]
    lhs = float(np.count_nonzero(om >= threshold - 1e-12))
    rhs = x / (math.log(z) ** poisson_rate(1 + lambda_dev) * max(1.0, lambda_dev * math.sqrt(llz)))
    params = {"x": x, "z": z, "lambda": lambda_dev, "star": star}
    return RatioReport("tails", params, lhs, rhs, "upper", ok, notes, {"threshold": threshold})


def _phi_series(z: int, degree: int) -> np.ndarray:
    # 1/phi(p^j) = 1 / (p^(j-1) (p - 1))
    return _series_product(primes_upto(z), lambda p, j: np.exp(-(j - 1) * math.log(p)) / (p - 1), degree)


def sumphi_exact(z: int, threshold: float, degree: int = 400, rankin: float = 1.8) -> tuple[float, float]:
    """sum of 1/phi(m) over z-smooth m with Omega(m) > threshold.

    Returns (value over Omega <= degree, bound on the part with Omega > degree).
    """
    coef = _phi_series(z, degree)
    ks = np.arange(degree + 1)
    value = float(np.sum(coef[ks > threshold]))
    p = primes_upto(z).astype(float)
    log_g = float(np.sum(np.log1p(rankin / (p - 1) / (1 - rankin / p))))
    tail = math.exp(log_g - (degree + 1) * math.log(rankin))
    return value, tail


def sumphi_truncated(z: int, threshold: float, n_max: int) -> float:
    n = np.arange(1, n_max + 1)
    mask = (largest_factor_array(n_max)[1:] <= z) & (_omega(n_max)[1:] > threshold)
    n = n[mask]
    return float(np.sum(1.0 / phi_array(_table_size(n_max))[n])) if n.size else 0.0


def sumphi_tail(z: int, lambda_dev: float) -> RatioReport:
    notes: list[str] = []
    ok = _check(0 <= lambda_dev <= 0.7, notes, "lambda outside [0, 0.7]")
    llz = loglog(z)
    threshold = (1 + lambda_dev) * llz
    lhs, tail = sumphi_exact(z, threshold)
    rhs = math.log(z) ** (1 - poisson_rate(1 + lambda_dev)) / max(1.0, lambda_dev * math.sqrt(llz))
    extra = {"tail_bound": tail, "threshold": threshold, "valid": float(tail < 0.01 * max(lhs, 1e-300))}
    return RatioReport("sumphi", {"z": z, "lambda": lambda_dev}, lhs, rhs, "upper", ok, notes, extra)


def smooth_ratio(x: int, y: int) -> RatioReport:
    notes: list[str] = []
    ok = _check(x >= y >= 2, notes, "needs x >= y >= 2")
    lhs = float(count_smooth(x, y))
    rhs = x * math.exp(-0.5 * math.log(x) / math.log(y))
    return RatioReport("smooth", {"x": x, "y": y}, lhs, rhs, "upper", ok, notes)


def rough_ratio(x: int, z: int) -> RatioReport:
    notes: list[str] = []
    ok = _check(x >= 2 * z >= 4, notes, "two-sided form needs x >= 2z >= 4")
    lhs = float(count_rough(x, z))
    return RatioReport("rough", {"x": x, "z": z}, lhs, x / math.log(z), "two_sided", ok, notes)


def _prime_divisors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _euler_factor(n: int) -> float:
    """n / phi(n) = prod_{p | n} p / (p - 1)."""
    return math.prod(p / (p - 1) for p in _prime_divisors(n))


def _rough_h(x: int, z: int) -> np.ndarray:
    """All h <= x with P-(h) >= z (h = 1 included)."""
    spf = spf_table(max(x, 2)).spf
    h = np.arange(2, x + 1)
    return np.concatenate(([1], h[spf[2 : x + 1] >= z]))


def primecor_count(x: int, z: int, B: int, C: int | None = None) -> RatioReport:
    """#{h <= x : P-(h) >= z, Bh+1 prime (and Ch+1 prime)} against the sieve bound."""
    for v in (B, C):
        if v is not None and (v <= 0 or v % 2):
            raise LemmaDomainError(f"B and C must be even positive integers, got {v}")
    if C is not None and C == B:
        raise LemmaDomainError("B and C must be distinct")
    notes: list[str] = []
    ok = _check(z >= 2 and x > 2 * z, notes, "needs z >= 2 and x > 2z")
    h = _rough_h(x, z)
    top = max(B, C or 0) * x + 1
    flags = prime_flags(top)
    hit = flags[B * h + 1]
    if C is None:
        lhs = float(np.count_nonzero(hit))
        rhs = x / (math.log(z) * math.log(x)) * _euler_factor(B)
        return RatioReport("primecor_single", {"x": x, "z": z, "B": B}, lhs, rhs, "upper", ok, notes)
    hit &= flags[C * h + 1]
    lhs = float(np.count_nonzero(hit))
    sing = _euler_factor(B * C * abs(B - C)) * _euler_factor(math.gcd(B, C))
    rhs = x / (math.log(z) * math.log(x) ** 2) * sing
    return RatioReport("primecor_pair", {"x": x, "z": z, "B": B, "C": C}, lhs, rhs, "upper", ok, notes)


# The four-fold sum S(z, Y; w; xi).


def _bc_by_omega(z: int, degree: int) -> np.ndarray:
    """sum over c < b <= z grouped by Omega(b) + Omega(c) of
    (1/(bc)) (b/phi b)(c/phi c)((b-c)/phi(b-c))."""
    size = _table_size(z)
    om = omega_array(size)
    phi = phi_array(size)
    b, c = np.meshgrid(np.arange(1, z + 1), np.arange(1, z + 1), indexing="ij")
    keep = b > c
    b, c = b[keep], c[keep]
    t = om[b].astype(np.int64) + om[c]
    val = 1.0 / (phi[b] * phi[c]) * (b - c) / phi[b - c]
    sel = t <= degree
    return np.bincount(t[sel], weights=val[sel], minlength=degree + 1)[: degree + 1]


def _a_by_omega(z: int, degree: int) -> np.ndarray:
    om = omega_array(_table_size(z))[1 : z + 1].astype(np.int64)
    a = np.arange(1, z + 1)
    sel = om <= degree
    return np.bincount(om[sel], weights=1.0 / a[sel], minlength=degree + 1)[: degree + 1]


def _d_by_omega(Y: int, degree: int, xi: float) -> np.ndarray:
    # f(p^j) = p^{-j(1-xi)} (p/(p-1))^2
    return _series_product(
        primes_upto(Y), lambda p, j: (p / (p - 1)) ** 2 * np.exp(-(1 - xi) * j * math.log(p)), degree
    )


def bigsum_exact(z: int, Y: int, w: int, xi: float = 0.0) -> float:
    """S(z, Y; w; xi), exactly: the d-sum is finite because Omega(d) <= w."""
    if w < 0:
        return 0.0
    A = _a_by_omega(z, w)
    BC = _bc_by_omega(z, w)
    D = _d_by_omega(Y, w, xi)
    total = 0.0
    for r in range(w + 1):
        for s in range(w + 1 - r):
            total += A[r] * D[s] * float(np.sum(BC[: w + 1 - r - s]))
    return float(total)


def bigsum_S(z: int, Y: int, w: int, xi: float = 0.0) -> RatioReport:
    notes: list[str] = []
    ok = _check(z >= math.e**3, notes, "needs z >= e^3")
    ok &= _check(2 <= Y <= z, notes, "needs 2 <= Y <= z")
    ok &= _check(1 <= w <= 1.5 * loglog(max(z, 3)), notes, "w outside [1, 1.5 loglog z]")
    ok &= _check(0 <= xi <= 1 / (10 * math.log(Y)) * (1 + 1e-12), notes, "xi outside [0, 1/(10 log Y)]")
    lhs = bigsum_exact(z, Y, w, xi)
    split = math.exp(math.log(z) ** 0.99)
    params = {"z": z, "Y": Y, "w": w, "xi": xi}
    if Y <= split:
        return RatioReport("bigsum_i", params, lhs, math.log(z) ** 5, "upper", ok, notes)
    rhs = _poisson_weight(4 * loglog(z), w)
    return RatioReport("bigsum_ii", params, lhs, rhs, "upper", ok, notes)
