import csv
import io
import json
import math

import numpy as np
import pytest

from catqbc.cli import main, parse_sweep
from catqbc.wigner import WignerGrid

SHOWCASE = "2.1213203435596424"


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO("".join(ln + "\n" for ln in text.splitlines() if not ln.startswith("#")))))


def test_cheat_showcase(capsys):
    code, out, _ = invoke(capsys, "cheat", "--alpha-prime", SHOWCASE, "--parity", "odd")
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["d"] - 0.496) < 1e-3 and abs(rep["c_max"] - 0.443) < 1e-3


def test_cheat_sweep_json_and_csv_agree(capsys):
    _, as_csv, _ = invoke(capsys, "cheat", "--sweep", "0.5:2:0.5", "--parity", "both", "--format", "csv")
    _, as_json, _ = invoke(capsys, "cheat", "--sweep", "0.5:2:0.5", "--parity", "both", "--format", "json")
    table, records = rows(as_csv), json.loads(as_json)
    assert len(table) == len(records) == 8
    for row, rec in zip(table, records):
        assert row["parity_label"] == rec["committed"]
        for key in ("alpha_prime", "d", "c_max", "c_max_prime"):
            assert float(row[key]) == rec[key]


def test_distinguish_values(capsys):
    _, out, _ = invoke(capsys, "distinguish", "--alpha", "1")
    assert abs(json.loads(out)["g_max_analytic"] - 0.06645) < 1e-5
    _, out, _ = invoke(capsys, "distinguish", "--alpha", "0")
    rep = json.loads(out)
    assert rep["degenerate"] and rep["g_max_analytic"] == 0.25


def test_distinguish_sweep_decreases(capsys):
    _, out, _ = invoke(capsys, "distinguish", "--sweep", "0:2:0.25", "--format", "csv")
    vals = [float(r["g_max_analytic"]) for r in rows(out)]
    assert len(vals) == 9
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_distinguish_formats_agree(capsys):
    _, as_csv, _ = invoke(capsys, "distinguish", "--sweep", "0.5:1.5:0.5", "--format", "csv")
    _, as_json, _ = invoke(capsys, "distinguish", "--sweep", "0.5:1.5:0.5", "--format", "json")
    for row, rec in zip(rows(as_csv), json.loads(as_json)):
        assert float(row["g_max_numeric"]) == rec["g_max_numeric"]
        assert float(row["trace_norm"]) == rec["trace_norm"]


def test_tradeoff_formats_agree(capsys):
    args = ("tradeoff", "--alpha-prime-list", "2,4", "--n-list", "10,300")
    _, as_csv, _ = invoke(capsys, *args)
    _, as_json, _ = invoke(capsys, *args, "--format", "json")
    table, records = rows(as_csv), json.loads(as_json)
    assert [int(r["n"]) for r in table] == [10, 300, 10, 300]
    for row, rec in zip(table, records):
        assert float(row["c_max_n"]) == rec["c_max_n"]
        assert float(row["g_max_n"]) == rec["g_max_n"]


def test_photon_dist_undisplaced_odd(capsys):
    _, out, _ = invoke(capsys, "photon-dist", "--alpha-prime", SHOWCASE, "--parity", "odd")
    probs = np.array([float(r["probability"]) for r in rows(out)])
    assert np.all(probs[0::2] < 1e-30)
    assert abs(probs.sum() - 1) < 1e-12


def test_photon_dist_displaced_parity(capsys):
    _, out, _ = invoke(capsys, "photon-dist", "--alpha-prime", SHOWCASE, "--displace", "optimal", "--format", "json")
    _, rep, _ = invoke(capsys, "cheat", "--alpha-prime", SHOWCASE)
    data, rep = json.loads(out), json.loads(rep)
    probs = np.array(data["probabilities"])
    assert abs(probs[0::2].sum() - probs[1::2].sum() - rep["parity_at_d"]) < 1e-10
    assert abs(data["mean_parity"] - rep["parity_at_d"]) < 1e-10


def test_photon_dist_even_target(capsys):
    _, out, _ = invoke(capsys, "photon-dist", "--alpha-prime", SHOWCASE, "--parity", "even", "--format", "json")
    assert abs(json.loads(out)["mean_parity"] - 1) < 1e-12


def test_wigner_csv_has_negative_origin(tmp_path, capsys):
    path = tmp_path / "w.csv"
    code, _, _ = invoke(capsys, "wigner", "--alpha-prime", "2.1213", "--range", "5", "--resolution", "51", "-o", str(path))
    assert code == 0
    grid = WignerGrid.from_csv(path.read_text())
    assert grid.values.shape == (51, 51)
    assert grid.values[25, 25] < -0.3 / math.pi


def test_wigner_near_vacuum(capsys):
    _, out, _ = invoke(capsys, "wigner", "--alpha-prime", "0.0001", "--parity", "even", "--range", "3", "--resolution", "31")
    grid = WignerGrid.from_csv(out)
    X, P = np.meshgrid(grid.x, grid.p)
    assert np.max(np.abs(grid.values - np.exp(-X**2 - P**2) / math.pi)) < 1e-6


def test_wigner_svg(capsys):
    _, out, _ = invoke(capsys, "wigner", "--alpha-prime", "2.1213", "--resolution", "41", "--format", "svg")
    assert out.startswith("<svg") and "<polyline" in out and out.rstrip().endswith("</svg>")


@pytest.mark.parametrize("fmt", ["csv", "svg"])
def test_wigner_is_byte_stable(tmp_path, capsys, fmt):
    a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
    for path in (a, b):
        invoke(capsys, "wigner", "--alpha-prime", "1.5", "--resolution", "41", "--format", fmt, "-o", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_run_writes_transcript(tmp_path, capsys):
    path = tmp_path / "t.jsonl"
    code, out, _ = invoke(
        capsys, "run", "--alpha-prime", "2", "--trials", "100", "--alice", "displace-optimal",
        "--monitor-vacuum", "--transcript", str(path),
    )
    assert code == 0
    assert json.loads(out)["trials"] == 100
    assert len(path.read_text().splitlines()) == 101


def test_refuses_overwrite(tmp_path, capsys):
    path = tmp_path / "x.json"
    path.write_text("keep")
    code, _, err = invoke(capsys, "cheat", "--alpha-prime", "1", "-o", str(path))
    assert code != 0 and json.loads(err)["error"] == "CliError"
    assert path.read_text() == "keep"
    code, _, _ = invoke(capsys, "cheat", "--alpha-prime", "1", "-o", str(path), "--force")
    assert code == 0 and json.loads(path.read_text())["committed"] == "odd"


def test_output_dir_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CATQBC_OUTPUT_DIR", str(tmp_path))
    invoke(capsys, "distinguish", "--alpha", "1", "-o", "g.json")
    assert (tmp_path / "g.json").exists()


@pytest.mark.parametrize(
    "argv, kind",
    [
        (["cheat"], "CliError"),
        (["cheat", "--alpha-prime", "-1"], "ValueError"),
        (["distinguish", "--alpha", "-1"], "ValueError"),
        (["run", "--alpha-prime", "1", "--alice", "bribe"], "ConfigError"),
        (["wigner", "--alpha-prime", "1", "--format", "json"], "UsageError"),
        (["cheat", "--sweep", "1:0:0.1"], "CliError"),
    ],
)
def test_errors_are_json(capsys, argv, kind):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    err = capsys.readouterr().err
    assert code != 0
    assert json.loads(err.strip().splitlines()[-1])["error"] == kind


def test_parse_sweep_inclusive():
    assert parse_sweep("0.2:1:0.2") == [0.2, 0.4, 0.6, 0.8, 1.0]
