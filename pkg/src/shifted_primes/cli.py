"""Command line: ``count``, ``sweep`` and ``lemma``.

Exit codes: 0 success, 1 usage, 2 resource budget, 3 band violation.
Data files carry no timestamps; timing lives only in the manifest.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from . import registry
from .asymptotics import DomainError, predict_order, shape_params, y_from_alpha
from .counting import ResourceBudgetError, exact_N, memory_budget, mertens_upper, moments
from .lemma_lab import LemmaDomainError, RatioReport

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_BANDS = 0, 1, 2, 3

SWEEP_COLUMNS = (
    "x",
    "y",
    "z",
    "alpha",
    "theta",
    "branch",
    "N_exact",
    "mertens_upper",
    "M1",
    "lower_cs",
    "predicted_order",
    "ratio_exact_over_predicted",
)

REPORT_COLUMNS = ("lemma_id", "params", "lhs", "rhs", "ratio", "direction", "in_range", "notes")


class UsageError(Exception):
    pass


@dataclass
class SweepRow:
    x: int
    y: float
    z: float
    alpha: float | None
    theta: float | None
    branch: str
    N_exact: int
    mertens_upper: int
    M1: int
    lower_cs: float
    predicted_order: float | None
    ratio_exact_over_predicted: float | None


@dataclass
class RunManifest:
    command: str
    parameters: dict
    artifact_version: str
    table_limits: dict
    wall_time: float
    output_paths: list


def sweep_row(x: int, y: float, segment: int | None = None, threads: int = 1) -> SweepRow:
    kw = {"threads": threads}
    if segment:
        kw["segment"] = segment
    n = exact_N(x, y, **kw)
    mom = moments(x, y, **kw)
    sp = shape_params(x, y, "upper") if x > math.e and y <= x else None
    try:
        pred = predict_order(x, y)
    except DomainError:
        pred = None
    return SweepRow(
        x=x,
        y=y,
        z=x / y,
        alpha=sp.alpha if sp else None,
        theta=sp.theta if sp else None,
        branch=pred.branch if pred else "none",
        N_exact=n,
        mertens_upper=mertens_upper(x, y),
        M1=mom.M1,
        lower_cs=float(mom.lower_cs),
        predicted_order=pred.value if pred else None,
        ratio_exact_over_predicted=n / pred.value if pred else None,
    )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def _parse_cell(col: str, s: str):
    if s == "":
        return None
    if col in ("x", "N_exact", "mertens_upper", "M1"):
        return int(s)
    if col == "branch":
        return s
    return float(s)


def rows_from_csv(text: str) -> list[SweepRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != SWEEP_COLUMNS:
        raise ValueError(f"unexpected sweep header {header}")
    return [SweepRow(**{c: _parse_cell(c, v) for c, v in zip(header, row)}) for row in reader]


def reports_to_csv(reports: list[RatioReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in reports:
        d = r.as_dict()
        d["params"] = json.dumps(d["params"], sort_keys=True)
        d["notes"] = "; ".join(d["notes"])
        w.writerow([_fmt(d[c]) for c in REPORT_COLUMNS])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _write(path: Path, text: str) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return str(path)


def _write_manifest(out_dir: Path, stem: str, command: str, params: dict, limits: dict, t0: float, paths: list) -> None:
    man = RunManifest(command, params, __version__, limits, time.perf_counter() - t0, paths)
    _write(out_dir / f"{stem}.manifest.json", _json(asdict(man)))


def parse_number(s: str) -> int:
    """Integer from '100000', '1e8' or '1_000'."""
    s = s.replace("_", "")
    try:
        return int(s)
    except ValueError:
        v = float(s)
        if not v.is_integer():
            raise argparse.ArgumentTypeError(f"{s!r} is not an integer")
        return int(v)


def parse_alpha_grid(text: str) -> list[float]:
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"alpha grid must be lo:hi:step, got {text!r}") from exc
    if step <= 0 or hi < lo:
        raise UsageError(f"bad alpha grid {text!r}")
    n = int(round((hi - lo) / step)) + 1
    return [round(lo + i * step, 12) for i in range(n)]


def cmd_count(args) -> int:
    t0 = time.perf_counter()
    row = sweep_row(args.x, args.y, args.segment, args.threads)
    out = Path(args.out_dir)
    stem = f"count_x{args.x}_y{_fmt(args.y)}"
    paths = [
        _write(out / f"{stem}.csv", rows_to_csv([row])),
        _write(out / f"{stem}.json", _json(asdict(row))),
    ]
    params = {"x": args.x, "y": args.y, "segment": args.segment, "threads": args.threads}
    _write_manifest(out, stem, "count", params, {"x": args.x, "memory_budget": memory_budget()}, t0, paths)
    sys.stdout.write(rows_to_csv([row]))
    return EXIT_OK


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    if args.alpha_grid:
        ys = [y_from_alpha(args.x, a) for a in parse_alpha_grid(args.alpha_grid)]
    elif args.y_list:
        ys = [float(parse_number(t)) for t in args.y_list.split(",")]
    else:
        raise UsageError("sweep needs --alpha-grid or --y-list")
    rows = [sweep_row(args.x, y, args.segment, args.threads) for y in sorted(ys)]
    out = Path(args.out_dir)
    stem = f"sweep_x{args.x}"
    text = rows_to_csv(rows)
    paths = [_write(out / f"{stem}.csv", text)]
    params = {"x": args.x, "alpha_grid": args.alpha_grid, "y_list": args.y_list, "segment": args.segment}
    _write_manifest(out, stem, "sweep", params, {"x": args.x, "memory_budget": memory_budget()}, t0, paths)
    sys.stdout.write(text)
    return EXIT_OK


def _lemma_params(lemma_id: str, extra: list[str]) -> dict:
    accepted = registry.PARAMS[lemma_id]
    aliases = {"lambda": "lambda_dev"}
    out = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise UsageError(f"unexpected argument {tok!r}")
        name = aliases.get(tok[2:].replace("-", "_"), tok[2:].replace("-", "_"))
        if name not in accepted:
            raise UsageError(f"lemma {lemma_id} takes {sorted(accepted)}, not --{name}")
        typ = accepted[name]
        if typ is bool:
            out[name] = True
            continue
        raw = next(it, None)
        if raw is None:
            raise UsageError(f"--{name} needs a value")
        out[name] = parse_number(raw) if typ is int else (float(raw) if typ is float else raw)
    return out


def cmd_lemma(args, extra: list[str]) -> int:
    t0 = time.perf_counter()
    out = Path(args.out_dir) if args.out_dir else None
    if args.all or args.freeze:
        reports = registry.run_grid()
        if args.freeze:
            path = registry.write_bands(registry.compute_bands(reports), args.bands)
            print(f"wrote {len(reports)} reports' bands to {path}")
            return EXIT_OK
        bands = registry.read_bands(args.bands)
        bad = registry.check_bands(reports, bands)
        if out:
            paths = [_write(out / "lemma_all.csv", reports_to_csv(reports))]
            _write_manifest(out, "lemma_all", "lemma --all", {"bands": str(args.bands or "")}, {}, t0, paths)
        for lid in registry.REGISTRY:
            rs = [r for r in reports if r.lemma_id == lid]
            nbad = sum(r in bad for r in rs)
            print(f"{'FAIL' if nbad else 'ok  '} {lid:16s} {len(rs):4d} reports, {nbad} outside band")
        return EXIT_BANDS if bad else EXIT_OK
    if not args.id:
        raise UsageError("lemma needs --id or --all")
    if args.id not in registry.REGISTRY:
        raise UsageError(f"unknown lemma id {args.id!r}; valid ids: {', '.join(registry.REGISTRY)}")
    rep = registry.run_lemma(args.id, **_lemma_params(args.id, extra))
    sys.stdout.write(_json(rep.as_dict()))
    if out:
        stem = f"lemma_{args.id}"
        paths = [
            _write(out / f"{stem}.json", _json(rep.as_dict())),
            _write(out / f"{stem}.csv", reports_to_csv([rep])),
        ]
        _write_manifest(out, stem, "lemma", {"id": args.id, **rep.params}, {}, t0, paths)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shifted-primes", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", help="one exact N(x, y) row", allow_abbrev=False)
    c.add_argument("--x", type=parse_number, required=True)
    c.add_argument("--y", type=parse_number, required=True)

    s = sub.add_parser("sweep", help="rows over a y grid at fixed x", allow_abbrev=False)
    s.add_argument("--x", type=parse_number, required=True)
    s.add_argument("--alpha-grid")
    s.add_argument("--y-list")

    for sp in (c, s):
        sp.add_argument("--segment", type=parse_number, default=None)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out-dir", default=".")

    lm = sub.add_parser("lemma", help="lemma ratio reports", allow_abbrev=False)
    lm.add_argument("--id")
    lm.add_argument("--all", action="store_true", help="run the standard grid and check frozen bands")
    lm.add_argument("--freeze", action="store_true", help="recompute the standard grid and rewrite the bands file")
    lm.add_argument("--bands", type=Path, default=None)
    lm.add_argument("--out-dir", default=None)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        if args.command != "lemma" and extra:
            raise UsageError(f"unrecognised arguments: {' '.join(extra)}")
        if args.command == "count":
            return cmd_count(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_lemma(args, extra)
    except (UsageError, LemmaDomainError, DomainError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceBudgetError, MemoryError) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
