import json
import math

import pytest

from shifted_primes import cli
from shifted_primes.counting import MEMORY_ENV, brute_N


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count(tmp_path, capsys):
    code, out, _ = run(capsys, "count", "--x", "1e5", "--y", "100", "--out-dir", str(tmp_path))
    assert code == 0
    rows = cli.rows_from_csv(out)
    assert len(rows) == 1 and rows[0].N_exact == brute_N(10**5, 100)
    assert rows[0].N_exact <= rows[0].mertens_upper == rows[0].M1
    stem = tmp_path / "count_x100000_y100"
    data = json.loads(stem.with_suffix(".json").read_text())
    assert data["N_exact"] == rows[0].N_exact
    man = json.loads((tmp_path / "count_x100000_y100.manifest.json").read_text())
    assert man["command"] == "count" and man["wall_time"] >= 0 and len(man["output_paths"]) == 2


def test_rerun_is_byte_identical(tmp_path, capsys):
    for d in ("a", "b"):
        assert run(capsys, "count", "--x", "20000", "--y", "30", "--out-dir", str(tmp_path / d))[0] == 0
        assert run(capsys, "sweep", "--x", "20000", "--y-list", "2,50,500", "--out-dir", str(tmp_path / d))[0] == 0
    for name in ("count_x20000_y30.csv", "count_x20000_y30.json", "sweep_x20000.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_alpha_grid(tmp_path, capsys):
    code, out, _ = run(capsys, "sweep", "--x", "1e6", "--alpha-grid", "0.1:0.9:0.1", "--out-dir", str(tmp_path))
    assert code == 0
    rows = cli.rows_from_csv(out)
    assert len(rows) == 9
    assert [r.y for r in rows] == sorted(r.y for r in rows)
    for r in rows:
        assert r.lower_cs <= r.N_exact <= r.mertens_upper
        assert r.alpha is not None and r.z == pytest.approx(r.x / r.y)
    assert (tmp_path / "sweep_x1000000.csv").read_text() == out


def test_csv_round_trip():
    row = cli.sweep_row(5000, 3000)
    assert row.alpha is None and row.branch == "none"
    rows = [cli.sweep_row(5000, 7), row]
    assert cli.rows_from_csv(cli.rows_to_csv(rows)) == rows
    with pytest.raises(ValueError):
        cli.rows_from_csv("a,b\n1,2\n")


def test_lemma_single(tmp_path, capsys):
    code, out, _ = run(capsys, "lemma", "--id", "cct", "--x", "30", "--q", "3", "--a", "1", "--k", "1", "--out-dir", str(tmp_path))
    assert code == 0
    rep = json.loads(out)
    assert rep["lhs"] == 7 and rep["lemma_id"] == "cct"
    assert (tmp_path / "lemma_cct.csv").exists()
    code, out, _ = run(capsys, "lemma", "--id", "poisson", "--v", "25", "--lambda", "0.2", "--side", "upper_tail")
    assert code == 0 and json.loads(out)["params"]["side"] == "upper_tail"


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--x", "100"],
        ["count", "--x", "1.5", "--y", "2"],
        ["count", "--x", "100", "--y", "2", "--bogus"],
        ["sweep", "--x", "100"],
        ["sweep", "--x", "1000", "--alpha-grid", "0.5:0.1:0.1"],
        ["lemma"],
        ["lemma", "--id", "nope"],
        ["lemma", "--id", "cct", "--x", "30", "--q", "4", "--a", "2", "--k", "1"],
        ["lemma", "--id", "cct", "--x", "30"],
        ["lemma", "--id", "selberg", "--x", "100", "--z", "3"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:  # argparse-level errors
        code = exc.code
    assert code == 1


def test_resource_exit_2(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv(MEMORY_ENV, "1000")
    code, _, err = run(capsys, "count", "--x", "1e6", "--y", "10", "--out-dir", str(tmp_path))
    assert code == 2 and MEMORY_ENV in err


def test_band_violation_exit_3(tmp_path, capsys):
    p = tmp_path / "tight.txt"
    p.write_text("version = 1\nselberg.lo = 1000\nselberg.hi = 1001\n")
    code, out, _ = run(capsys, "lemma", "--all", "--bands", str(p))
    assert code == 3
    assert "FAIL selberg" in out


def test_parse_number():
    assert cli.parse_number("1e8") == 10**8
    assert cli.parse_number("1_000") == 1000
    assert cli.parse_alpha_grid("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
