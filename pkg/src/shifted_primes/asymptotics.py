"""Shape parameters for (x, y), the order-of-magnitude predictor for N(x, y),
and exact Poisson tail sums with their large-deviation bounds.

All logarithms are natural; ``loglog`` is log log, never a base-2 log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

LOG4 = math.log(4.0)
ALPHA_THRESHOLD = 1.0 / LOG4
BRANCH_I_MARGIN = 0.05


class DomainError(ValueError):
    pass


def delta_const() -> float:
    """1 - (1 + log log 2) / log 2 = 0.086071332..."""
    return 1.0 - (1.0 + math.log(math.log(2.0))) / math.log(2.0)


def poisson_rate(u: float) -> float:
    """Large-deviation rate u log u - u + 1 (zero at u = 1, convex)."""
    if u <= 0:
        raise DomainError(f"rate function needs u > 0, got {u}")
    return u * math.log(u) - u + 1.0


def loglog(t: float) -> float:
    return math.log(math.log(t))


@dataclass(frozen=True)
class ShapeParams:
    """Where (x, y) sits relative to the threshold alpha = 1/log 4.

    ``alpha`` is defined through y = x / exp((log x)^alpha) and is None when
    y > x/e. ``convention`` records how z, gamma and w were derived:

    * ``"upper"``: z = x/y, gamma = 1/(alpha log 4), w = floor(gamma loglog z)
    * ``"lower"``: z = min(y, x/y), gamma = min(1, 1/(alpha log 4)),
      w = 2 floor(gamma loglog z)

    w is clamped at 0 when loglog z is not positive.
    """

    x: float
    y: float
    z: float
    alpha: float | None
    theta: float | None
    gamma: float | None
    w: int | None
    branch: str
    convention: str
    branches: tuple[str, ...] = field(default=())


def alpha_of(x: float, y: float) -> float | None:
    if x < math.e * y:
        return None
    return loglog(x / y) / loglog(x)


def y_from_alpha(x: float, alpha: float) -> float:
    return x / math.exp(math.log(x) ** alpha)


def applicable_branches(x: float, y: float) -> tuple[str, ...]:
    """Every regime of the order estimate whose range contains (x, y)."""
    out = []
    a = alpha_of(x, y)
    lx = math.log(x)
    if a is not None and ALPHA_THRESHOLD <= a <= 1.0 - math.log(2.0) / math.log(lx):
        out.append("ii")
    if y <= x / 2 and (a is None or a <= ALPHA_THRESHOLD):
        out.append("iii")
    if y <= x ** (1.0 - BRANCH_I_MARGIN):
        out.append("i")
    return tuple(out)


def shape_params(x: float, y: float, convention: str = "lower") -> ShapeParams:
    if y > x:
        raise DomainError(f"need y <= x, got x={x}, y={y}")
    if x <= math.e:
        raise DomainError(f"need x > e, got x={x}")
    if convention not in ("upper", "lower"):
        raise DomainError(f"unknown convention {convention!r}")
    a = alpha_of(x, y)
    z = x / y if convention == "upper" else min(y, x / y)
    theta = gamma = w = None
    if a is not None:
        theta = (a - ALPHA_THRESHOLD) * math.sqrt(loglog(x))
        if a > 0:
            gamma = 1.0 / (a * LOG4)
            if convention == "lower":
                gamma = min(1.0, gamma)
        elif convention == "lower":
            gamma = 1.0
        if gamma is not None:
            llz = loglog(z) if z > math.e else 0.0
            w = max(0, math.floor(gamma * llz))
            if convention == "lower":
                w *= 2
    branches = applicable_branches(x, y)
    return ShapeParams(
        x=x,
        y=y,
        z=z,
        alpha=a,
        theta=theta,
        gamma=gamma,
        w=w,
        branch=branches[0] if branches else "none",
        convention=convention,
        branches=branches,
    )


@dataclass(frozen=True)
class OrderPrediction:
    """Predicted order of N(x, y) with every implied constant set to 1.

    ``values`` holds the formula of each applicable branch; ``value`` is the
    one for the preferred branch (ii before iii before i). ``asymptotic`` is
    true when the regime alpha < 1/log 4 holds, where the branch iii formula
    is also the conjectured asymptotic and not only the order.
    """

    branch: str
    value: float
    values: dict[str, float]
    formula_terms: dict[str, float]
    asymptotic: bool


def _branch_i(x: float, y: float) -> tuple[float, dict]:
    # the range starts at y = 3; below that loglog y is evaluated at 3
    yy = max(y, 3.0)
    d = delta_const()
    logy_pow = math.log(yy) ** d
    llroot = math.sqrt(loglog(yy))
    return x / (logy_pow * llroot), {"logy_pow_delta": logy_pow, "sqrt_loglog_y": llroot}


def _branch_ii(x: float, alpha: float, theta: float) -> tuple[float, dict]:
    expo = delta_const() + alpha - 1.0 - math.log(alpha) / math.log(2.0)
    damp = max(1.0, theta)
    return x / (damp * math.log(x) ** expo), {"exponent": expo, "max_1_theta": damp}


def _branch_iii(x: float, y: float) -> tuple[float, dict]:
    lr = math.log(x / y)
    return x * lr / math.log(x), {"log_x_over_y": lr, "log_x": math.log(x)}


def predict_order(x: float, y: float) -> OrderPrediction:
    if x < 10:
        raise DomainError(f"predict_order needs x >= 10, got x={x}")
    if not 2 <= y <= x / 2:
        raise DomainError(f"predict_order needs 2 <= y <= x/2, got y={y} with x={x}")
    sp = shape_params(x, y)
    values: dict[str, float] = {}
    terms: dict[str, float] = {}
    for b in sp.branches:
        if b == "i":
            v, t = _branch_i(x, y)
        elif b == "ii":
            v, t = _branch_ii(x, sp.alpha, sp.theta)
        else:
            v, t = _branch_iii(x, y)
        values[b] = v
        terms.update({f"{b}.{k}": val for k, val in t.items()})
    asym = sp.alpha is not None and sp.alpha < ALPHA_THRESHOLD
    return OrderPrediction(sp.branch, values[sp.branch], values, terms, asym)


# Poisson tails


class PoissonTail(NamedTuple):
    exact_sum: float
    bound: float
    window_sum: float
    applicable: bool


def _log_pmf(k: int, v: float) -> float:
    return -v + k * math.log(v) - math.lgamma(k + 1)


def _sum_down(k0: int, k_stop: int, v: float) -> float:
    """sum_{k_stop <= k <= k0} e^-v v^k / k!, walking down from k0 (k0 <= v)."""
    if k0 < max(k_stop, 0):
        return 0.0
    t = math.exp(_log_pmf(k0, v))
    terms = [t]
    k = k0
    while k > max(k_stop, 0):
        t *= k / v
        k -= 1
        terms.append(t)
        if t < terms[0] * 1e-20:
            break
    return math.fsum(terms)


def _sum_up(k0: int, k_stop: float, v: float) -> float:
    """sum_{k0 <= k <= k_stop} e^-v v^k / k!, walking up from k0 (k0 >= v)."""
    if k0 > k_stop:
        return 0.0
    t = math.exp(_log_pmf(k0, v))
    terms = [t]
    k = k0
    while k + 1 <= k_stop:
        k += 1
        t *= v / k
        terms.append(t)
        if t < terms[0] * 1e-20:
            break
    return math.fsum(terms)


def poisson_partial(v: float, lambda_dev: float, side: str = "lower_tail") -> PoissonTail:
    """Poisson(v) tail beyond (1 -/+ lambda) v, its bound and its short window.

    ``exact_sum`` is P(K <= (1 - lambda) v) for the lower tail and
    P(K >= (1 + lambda) v) for the upper tail. ``window_sum`` restricts the
    tail to the 1/lambda terms nearest the cut. ``bound`` is
    exp(-v Q(1 -/+ lambda)) / (lambda sqrt v) with Q the rate function, and
    ``applicable`` says whether v^-1/2 <= lambda <= 1/2.
    """
    if v <= 0:
        raise DomainError("v must be positive")
    if not 0 < lambda_dev < 1:
        raise DomainError("lambda must lie in (0, 1)")
    applicable = v**-0.5 <= lambda_dev <= 0.5
    if side == "lower_tail":
        cut = (1.0 - lambda_dev) * v
        k0 = math.floor(cut)
        exact = _sum_down(k0, 0, v)
        window = _sum_down(k0, math.ceil(cut - 1.0 / lambda_dev), v)
        rate = poisson_rate(1.0 - lambda_dev)
    elif side == "upper_tail":
        cut = (1.0 + lambda_dev) * v
        k0 = math.ceil(cut)
        exact = _sum_up(k0, math.inf, v)
        window = _sum_up(k0, cut + 1.0 / lambda_dev, v)
        rate = poisson_rate(1.0 + lambda_dev)
    else:
        raise DomainError(f"unknown side {side!r}")
    bound = math.exp(-v * rate) / (lambda_dev * math.sqrt(v))
    return PoissonTail(exact, bound, window, applicable)


def poisson_partial_mp(v: float, lambda_dev: float, side: str = "lower_tail", bits: int = 128) -> float:
    """Reference tail sum in ``bits``-bit arithmetic via plain term-by-term summation."""
    import mpmath

    with mpmath.workprec(bits):
        mv = mpmath.mpf(v)
        if side == "lower_tail":
            top = math.floor((1.0 - lambda_dev) * v)
            ks = range(0, top + 1)
        else:
            k0 = math.ceil((1.0 + lambda_dev) * v)
            ks = range(k0, k0 + int(20 * v + 200))
        total = mpmath.fsum(mpmath.exp(-mv) * mv**k / mpmath.factorial(k) for k in ks)
        return float(total)


def poisson_coefficients(v: float, k_max: int) -> list[float]:
    """v^k / k! for 0 <= k <= k_max (no e^-v factor)."""
    out = [1.0]
    for k in range(1, k_max + 1):
        out.append(out[-1] * v / k)
    return out
