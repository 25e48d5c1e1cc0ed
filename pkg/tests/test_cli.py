import csv
import io
import json

import pytest

from bfbin.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bf_superiority_human_table(capsys):
    code, out, _ = run(
        capsys, "bf", "--test", "plus0", "--n1", "60", "--y1", "38", "--n2", "59", "--y2", "48"
    )
    assert code == 0
    assert "4.322" in out
    assert "BF_PLUS_OVER_NULL" in out
    assert "evidence for H+ over H0" in out


def test_bf_two_sided_json_value(capsys):
    code, out, _ = run(
        capsys,
        "bf", "--test", "two-sided", "--n1", "5", "--y1", "0", "--n2", "5", "--y2", "0",
        "--output", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["value"] == pytest.approx(36 / 11, rel=1e-9)
    assert doc["result"]["orientation"] == "BF01_NULL_OVER_ALT"
    assert doc["meta"]["version"]
    assert isinstance(doc["meta"]["runtime_ms"], int)


def test_bf_composite_json_value(capsys):
    code, out, _ = run(
        capsys,
        "bf", "--test", "plusminus", "--n1", "43", "--y1", "12", "--n2", "81", "--y2", "49",
        "--output", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["value"] == pytest.approx(3702.65, rel=0.005)


def test_json_round_trips_identically(capsys):
    code, out, _ = run(
        capsys,
        "bf", "--test", "two-sided", "--n1", "5", "--y1", "1", "--n2", "5", "--y2", "4",
        "--output", "json",
    )
    assert code == 0
    assert json.dumps(json.loads(out), indent=2) + "\n" == out


def test_oc_reports_rejection_set_size_and_power(capsys):
    code, out, _ = run(
        capsys,
        "oc", "--test", "two-sided", "--n1", "5", "--n2", "5", "--k", "1/3",
        "--output", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["rejection_set_size"] == 12
    assert doc["result"]["bayes_power"] == pytest.approx(1 / 3, abs=1e-9)
    assert doc["result"]["freq_t1e"] is None


def test_oc_freq_t1e_includes_maximizing_point(capsys):
    code, out, _ = run(
        capsys,
        "oc", "--test", "plusminus", "--n1", "8", "--n2", "8", "--k", "1/3",
        "--freq-t1e", "--output", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["freq_t1e"] == pytest.approx(0.2607, abs=0.001)
    p1, p2 = doc["result"]["freq_t1e_at"]
    assert p2 <= p1


def test_fraction_and_decimal_k_agree(capsys):
    argv = ["oc", "--test", "two-sided", "--n1", "5", "--n2", "5", "--output", "json", "--k"]
    _, out1, _ = run(capsys, *argv, "1/3")
    _, out2, _ = run(capsys, *argv, str(1 / 3))
    r1, r2 = json.loads(out1)["result"], json.loads(out2)["result"]
    assert r1 == r2


def test_calibrate_json_and_csv_rows_agree(capsys):
    base = [
        "calibrate", "--test", "plusminus", "--k", "1/3", "--nmin", "10", "--nmax", "20",
        "--lookahead", "0", "--p1", "0.3", "--p2", "0.6", "--freq-t1e",
    ]
    code, json_out, _ = run(capsys, *base, "--output", "json")
    assert code == 0
    doc = json.loads(json_out)
    code, csv_out, _ = run(capsys, *base, "--output", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(csv_out)))
    assert len(rows) == len(doc["result"]["curves"])
    for got, want in zip(rows, doc["result"]["curves"]):
        assert int(got["n_total"]) == want["n_total"]
        assert int(got["n1"]) == want["n1"]
        assert float(got["bayes_power"]) == pytest.approx(want["bayes_power"], rel=1e-9)
        assert float(got["freq_t1e"]) == pytest.approx(want["freq_t1e"], rel=1e-9)


def test_calibrate_reproduces_published_totals(capsys):
    code, out, _ = run(
        capsys,
        "calibrate", "--test", "plusminus", "--k", "1/3", "--kf", "3", "--nmin", "10",
        "--nmax", "45", "--lookahead", "0", "--p1", "0.3", "--p2", "0.6", "--output", "json",
    )
    assert code == 0
    result = json.loads(out)["result"]
    assert result["n_power"] == 41
    assert result["n_alpha"] == 16
    assert result["n_pce"] == 41
    assert result["n_freq_power"] == 24


def test_calibrate_absent_criterion_is_null_not_error(capsys):
    code, out, _ = run(
        capsys,
        "calibrate", "--test", "plus0", "--k", "1/3", "--nmin", "2", "--nmax", "5",
        "--lookahead", "0", "--output", "json",
    )
    assert code == 0
    result = json.loads(out)["result"]
    assert result["n_power"] is None


def test_calibrate_config_echo_materializes_defaults(capsys):
    code, out, _ = run(
        capsys,
        "calibrate", "--test", "plus0", "--k", "1/10", "--nmin", "10", "--nmax", "12",
        "--lookahead", "0", "--output", "json",
    )
    assert code == 0
    cfg = json.loads(out)["config"]
    assert cfg["k"] == pytest.approx(0.1)
    assert cfg["k_f"] == 3.0
    assert cfg["power_target"] == 0.8
    assert cfg["alloc1"] == 0.5
    assert cfg["analysis"]["arm1_prior"] == [1.0, 1.0]
    assert cfg["design"]["null_prior"] == [1.0, 1.0]


def test_unbalanced_allocation_flags(capsys):
    code, out, _ = run(
        capsys,
        "calibrate", "--test", "plusminus", "--k", "1/3", "--nmin", "83", "--nmax", "83",
        "--alloc1", "1/3", "--alloc2", "2/3", "--lookahead", "0", "--output", "json",
    )
    assert code == 0
    row = json.loads(out)["result"]["curves"][0]
    assert (row["n1"], row["n2"]) == (28, 55)


def test_svg_plot_writes_figure_and_csv_sidecar(tmp_path, capsys):
    svg = tmp_path / "report.svg"
    code, _, _ = run(
        capsys,
        "calibrate", "--test", "plus0", "--k", "1/3", "--nmin", "10", "--nmax", "14",
        "--lookahead", "0", "--output", "svg-plot", "--out-file", str(svg),
    )
    assert code == 0
    assert svg.exists() and svg.read_text().lstrip().startswith("<?xml")
    sidecar = tmp_path / "report.csv"
    assert sidecar.exists()
    rows = list(csv.DictReader(io.StringIO(sidecar.read_text())))
    assert len(rows) == 5


def test_svg_plot_requires_out_file(capsys):
    code, _, err = run(
        capsys,
        "calibrate", "--test", "plus0", "--k", "1/3", "--nmin", "10", "--nmax", "12",
        "--output", "svg-plot",
    )
    assert code == 2
    assert "out-file" in err


def test_out_file_receives_json(tmp_path, capsys):
    path = tmp_path / "bf.json"
    code, out, _ = run(
        capsys,
        "bf", "--test", "plus0", "--n1", "1", "--y1", "0", "--n2", "1", "--y2", "1",
        "--output", "json", "--out-file", str(path),
    )
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["result"]["value"] == pytest.approx(2.5, abs=1e-9)


def test_invalid_range_exits_2(capsys):
    code, _, err = run(
        capsys, "calibrate", "--test", "plus0", "--k", "1/3", "--nmin", "10", "--nmax", "5"
    )
    assert code == 2
    assert "n_min" in err


def test_two_sided_point_null_flag_rejected(capsys):
    code, _, err = run(
        capsys,
        "bf", "--test", "two-sided", "--n1", "5", "--y1", "0", "--n2", "5", "--y2", "0",
        "--a0a", "2",
    )
    assert code == 2
    assert "a0a" in err


def test_half_given_freq_point_rejected(capsys):
    code, _, err = run(
        capsys,
        "oc", "--test", "two-sided", "--n1", "5", "--n2", "5", "--k", "1/3", "--p1", "0.3",
    )
    assert code == 2
    assert "--p2" in err or "p2" in err


def test_unknown_test_choice_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bf", "--test", "nope", "--n1", "1", "--y1", "0", "--n2", "1", "--y2", "0"])
    assert exc.value.code == 2


def test_bad_fraction_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["oc", "--test", "two-sided", "--n1", "5", "--n2", "5", "--k", "abc"])
    assert exc.value.code == 2


def test_threads_env_override(capsys, monkeypatch):
    argv = [
        "calibrate", "--test", "plus0", "--k", "1/3", "--nmin", "10", "--nmax", "16",
        "--lookahead", "0", "--output", "json",
    ]
    _, base, _ = run(capsys, *argv)
    monkeypatch.setenv("BFBIN_THREADS", "2")
    _, threaded, _ = run(capsys, *argv)
    a, b = json.loads(base), json.loads(threaded)
    assert a["result"] == b["result"]
    monkeypatch.setenv("BFBIN_THREADS", "zzz")
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "bfbin" in capsys.readouterr().out
