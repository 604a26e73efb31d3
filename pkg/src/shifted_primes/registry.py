"""The lemma registry, its standard parameter grid and the frozen ratio bands.

The implied constants in the bounds are unspecified, so the testable claim
is stability: the grid is evaluated once, the extreme ratios per lemma are
rounded outward to four significant digits and committed as ``bands.txt``,
and every later run must stay inside them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable

from . import lemma_lab as lab
from .asymptotics import loglog

BANDS_VERSION = 1

REGISTRY: dict[str, Callable[..., lab.RatioReport]] = {
    "selberg": lab.selberg_ratio,
    "halasz_count": partial(lab.halasz_counts, mode="count"),
    "halasz_recip": partial(lab.halasz_counts, mode="recip_sum"),
    "hall_lower": lab.hall_lower,
    "timofeev_upper": lab.timofeev_counts,
    "timofeev_lower": lab.timofeev_lower,
    "recip": lab.recip_weighted_sum,
    "cct": lab.cct_count,
    "poisson": lab.poisson_report,
    "tails": lab.tail_counts,
    "sumphi": lab.sumphi_tail,
    "smooth": lab.smooth_ratio,
    "rough": lab.rough_ratio,
    "primecor_single": lab.primecor_count,
    "primecor_pair": lab.primecor_count,
    "bigsum_i": lab.bigsum_S,
    "bigsum_ii": lab.bigsum_S,
}

# parameter name -> type, as accepted on the command line
PARAMS: dict[str, dict[str, type]] = {
    "selberg": {"x": int, "k": int},
    "halasz_count": {"x": int, "z": int, "m": int, "star": bool},
    "halasz_recip": {"x": int, "z": int, "m": int, "star": bool},
    "hall_lower": {"x": int, "z": int, "m": int},
    "timofeev_upper": {"x": int, "z": int, "m": int, "star": bool},
    "timofeev_lower": {"x": int, "z": int, "m": int},
    "recip": {"x": int, "z": int, "k": int, "xi": float, "c": float, "n_max": int},
    "cct": {"x": int, "q": int, "a": int, "k": int},
    "poisson": {"v": float, "lambda_dev": float, "side": str},
    "tails": {"x": int, "z": int, "lambda_dev": float, "star": bool},
    "sumphi": {"z": int, "lambda_dev": float},
    "smooth": {"x": int, "y": int},
    "rough": {"x": int, "z": int},
    "primecor_single": {"x": int, "z": int, "B": int},
    "primecor_pair": {"x": int, "z": int, "B": int, "C": int},
    "bigsum_i": {"z": int, "Y": int, "w": int, "xi": float},
    "bigsum_ii": {"z": int, "Y": int, "w": int, "xi": float},
}

X_GRID = (10**4, 10**5, 10**6)
Z_GRID = (10**2, 10**3)


def run_lemma(lemma_id: str, **params) -> lab.RatioReport:
    if lemma_id not in REGISTRY:
        raise KeyError(lemma_id)
    return REGISTRY[lemma_id](**params)


def _m_range(z: int, lo_frac: float, hi_frac: float) -> range:
    llz = loglog(z)
    return range(math.ceil(lo_frac * llz), math.floor(hi_frac * llz) + 1)


def standard_grid() -> list[tuple[str, dict]]:
    """(lemma_id, params) for every point of the regression grid."""
    g: list[tuple[str, dict]] = []
    for x in X_GRID:
        for k in range(0, math.floor(1.9 * loglog(x)) + 1):
            g.append(("selberg", {"x": x, "k": k}))
        for z in Z_GRID:
            for star in (False, True):
                for m in _m_range(z, 0, 2.9 if star else 1.9):
                    g.append(("halasz_count", {"x": x, "z": z, "m": m, "star": star}))
                    g.append(("halasz_recip", {"x": x, "z": z, "m": m, "star": star}))
                for m in _m_range(z, 0, 1.9):
                    g.append(("timofeev_upper", {"x": x, "z": z, "m": m, "star": star}))
                for lam in (0.1, 0.3, 0.5, 0.7, 0.9):
                    g.append(("tails", {"x": x, "z": z, "lambda_dev": lam, "star": star}))
            for m in _m_range(z, 0.1, 1.9):
                g.append(("hall_lower", {"x": x, "z": z, "m": m}))
                g.append(("timofeev_lower", {"x": x, "z": z, "m": m}))
            for k in _m_range(z, 0, 1.8):
                for xi in (0.0, 1 / (5 * math.log(x))):
                    for c in (0.0, 2.0):
                        g.append(("recip", {"x": x, "z": z, "k": k, "xi": xi, "c": c}))
            for B in (2, 6, 30):
                g.append(("primecor_single", {"x": x, "z": z, "B": B}))
            for B, C in ((2, 4), (2, 6), (6, 10)):
                g.append(("primecor_pair", {"x": x, "z": z, "B": B, "C": C}))
        for q, a in ((3, 1), (3, 2), (10, 3), (101, 3)):
            for k in (1, 2, 3):
                g.append(("cct", {"x": x, "q": q, "a": a, "k": k}))
        for e in (2, 4, 8):
            g.append(("smooth", {"x": x, "y": round(x ** (1 / e))}))
        for z in (3, 10, 100):
            g.append(("rough", {"x": x, "z": z}))
    for v in (10.0, 25.0, 100.0, 400.0):
        for lam in poisson_lambda_grid(v):
            for side in ("lower_tail", "upper_tail"):
                g.append(("poisson", {"v": v, "lambda_dev": lam, "side": side}))
    for z in (10**2, 10**3, 10**4):
        for lam in (0.0, 0.1, 0.3, 0.5, 0.7):
            g.append(("sumphi", {"z": z, "lambda_dev": lam}))
    for z in (50, 100, 200):
        for Y in (3, 10, z):
            for w in range(1, math.floor(1.5 * loglog(z)) + 1):
                for xi in (0.0, 1 / (10 * math.log(Y))):
                    branch = "bigsum_i" if Y <= math.exp(math.log(z) ** 0.99) else "bigsum_ii"
                    g.append((branch, {"z": z, "Y": Y, "w": w, "xi": xi}))
    return g


def poisson_lambda_grid(v: float, points: int = 6) -> list[float]:
    lo, hi = v**-0.5, 0.5
    return [lo + (hi - lo) * i / (points - 1) for i in range(points)]


def run_grid(grid: Iterable[tuple[str, dict]] | None = None) -> list[lab.RatioReport]:
    return [run_lemma(i, **p) for i, p in (standard_grid() if grid is None else grid)]


@dataclass(frozen=True)
class Band:
    lo: float | None
    hi: float | None

    def contains(self, ratio: float) -> bool:
        if self.lo is not None and not ratio >= self.lo:
            return False
        if self.hi is not None and not ratio <= self.hi:
            return False
        return True


def _round_sig(v: float, up: bool, digits: int = 4) -> float:
    if v == 0 or not math.isfinite(v):
        return v
    e = math.floor(math.log10(abs(v))) - digits + 1
    scale = 10.0**e
    q = v / scale
    q = math.ceil(q - 1e-9) if up else math.floor(q + 1e-9)
    return float(f"{q * scale:.{digits}g}")


def compute_bands(reports: Iterable[lab.RatioReport]) -> dict[str, Band]:
    seen: dict[str, list[lab.RatioReport]] = {}
    for r in reports:
        seen.setdefault(r.lemma_id, []).append(r)
    out = {}
    for lid, rs in seen.items():
        ratios = [r.ratio for r in rs]
        direction = rs[0].direction
        lo = _round_sig(min(ratios), up=False) if direction in ("lower", "two_sided") else None
        hi = _round_sig(max(ratios), up=True) if direction in ("upper", "two_sided") else None
        out[lid] = Band(lo, hi)
    return out


def default_bands_path() -> Path:
    return Path(str(resources.files("shifted_primes") / "data" / "bands.txt"))


def write_bands(bands: dict[str, Band], path: Path | None = None) -> Path:
    path = Path(path or default_bands_path())
    lines = [
        "# frozen ratio bands for the lemma registry; regenerate with `shifted-primes lemma --freeze`",
        f"version = {BANDS_VERSION}",
    ]
    for lid in lab.LEMMA_IDS:
        if lid not in bands:
            continue
        b = bands[lid]
        if b.lo is not None:
            lines.append(f"{lid}.lo = {b.lo!r}")
        if b.hi is not None:
            lines.append(f"{lid}.hi = {b.hi!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_bands(path: Path | None = None) -> dict[str, Band]:
    path = Path(path or default_bands_path())
    raw: dict[str, dict[str, float]] = {}
    version = None
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = (s.strip() for s in line.partition("="))
        if key == "version":
            version = int(val)
            continue
        lid, _, side = key.rpartition(".")
        raw.setdefault(lid, {})[side] = float(val)
    if version != BANDS_VERSION:
        raise ValueError(f"bands file {path} has version {version}, expected {BANDS_VERSION}")
    return {lid: Band(d.get("lo"), d.get("hi")) for lid, d in raw.items()}


def check_bands(reports: Iterable[lab.RatioReport], bands: dict[str, Band]) -> list[lab.RatioReport]:
    """Reports whose ratio falls outside the band of their lemma (or has no band)."""
    bad = []
    for r in reports:
        band = bands.get(r.lemma_id)
        if band is None or not band.contains(r.ratio):
            bad.append(r)
    return bad
