"""CLI surface: subcommands, exit codes, report files, determinism."""

import copy
import json

import pytest

from blackbox2 import cli


def run(argv):
    return cli.main(argv)


def test_sym4_verified_report(tmp_path):
    out = tmp_path / "res.json"
    rc = run(["sym4", "--flavor", "pgl2", "--p", "3", "--k", "2",
              "--seed", "42", "--verify", "--out", str(out)])
    assert rc == cli.EXIT_OK
    report = json.loads(out.read_text())
    assert report["verified"] is True
    assert report["result"]["target"] == "Sym4"
    assert report["counters"]["mul"] > 0 and report["counters"]["rand"] > 0


def test_psl2_alt4_report(tmp_path, capsys):
    rc = run(["sym4", "--flavor", "psl2", "--p", "11", "--k", "1",
              "--seed", "7", "--verify"])
    assert rc == cli.EXIT_OK
    assert "Alt4" in capsys.readouterr().out


def test_sl2_normalizer_report(tmp_path):
    out = tmp_path / "res.json"
    rc = run(["sym4", "--flavor", "sl2", "--p", "5", "--k", "1",
              "--seed", "7", "--verify", "--out", str(out)])
    assert rc == cli.EXIT_OK
    report = json.loads(out.read_text())
    assert report["result"]["target"] == "SL2(3)-normalizer(order24)"
    assert report["verified"] is True


def test_field_size_command(capsys):
    rc = run(["field-size", "--flavor", "pgl2", "--p", "3", "--k", "3",
              "--kmax", "8", "--seed", "1"])
    assert rc == cli.EXIT_OK
    assert "match = True" in capsys.readouterr().out


def test_subfield_invalid_degree_exit_2(capsys):
    rc = run(["subfield", "--flavor", "pgl2", "--p", "3", "--k", "4",
              "--a", "3", "--seed", "0"])
    assert rc == cli.EXIT_INVALID


def test_verify_roundtrip_and_tamper(tmp_path):
    out = tmp_path / "res.json"
    rc = run(["subfield", "--flavor", "pgl2", "--p", "7", "--k", "2",
              "--a", "1", "--seed", "3", "--verify", "--out", str(out)])
    assert rc == cli.EXIT_OK
    rc = run(["verify", "--input", str(out)])
    assert rc == cli.EXIT_OK
    # tamper with one generator entry; re-verification must fail
    report = json.loads(out.read_text())
    bad = copy.deepcopy(report)
    rows = bad["result"]["generators"][0]["rows"]
    rows[0][0][0] = (rows[0][0][0] + 1) % 7
    bad_path = tmp_path / "tampered.json"
    bad_path.write_text(json.dumps(bad))
    rc = run(["verify", "--input", str(bad_path)])
    assert rc == cli.EXIT_MISMATCH


def test_bench_writes_csv_and_figure(tmp_path):
    out = tmp_path / "bench.csv"
    fig = tmp_path / "bench.png"
    rc = run(["bench", "--flavor", "pgl2", "--p", "3", "--k-list", "2,4",
              "--trials", "2", "--seed", "5", "--out", str(out),
              "--fig", str(fig)])
    assert rc == cli.EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3  # header + one row per k
    header = lines[0].split(",")
    assert {"k", "q", "median_rand", "median_mul"} <= set(header)
    assert fig.stat().st_size > 0


def test_same_seed_identical_report(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        rc = run(["sym4", "--flavor", "psl2", "--p", "3", "--k", "2",
                  "--seed", "11", "--verify", "--out", str(p)])
        assert rc == cli.EXIT_OK
    reports = [json.loads(p.read_text()) for p in paths]
    for rep in reports:
        rep.pop("wall_time_ms")
    assert reports[0] == reports[1]


def test_unknown_flavor_rejected():
    with pytest.raises(SystemExit):
        run(["sym4", "--flavor", "gl3", "--p", "3", "--k", "2"])
