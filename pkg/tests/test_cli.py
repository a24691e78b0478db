import json

import pytest

from mbar.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_range():
    assert parse_range("5") == [5]
    assert parse_range("3:6") == [3, 4, 5, 6]
    assert parse_range("10:40:10") == [10, 20, 30, 40]
    assert parse_range("50,100") == [50, 100]


def test_class_text(capsys):
    assert run(capsys, "class", "--n", "5", "--method", "strata", "--format", "text")[:2] == (0, "1 + 5*L + L^2\n")
    assert run(capsys, "class", "--n", "3", "--method", "stirling")[:2] == (0, "1\n")


def test_class_json_schema(capsys):
    code, out, _ = run(capsys, "class", "--n", "6", "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert set(report) == {"command", "config", "results", "resolved_convention", "findings"}
    assert report["resolved_convention"] == {"k_start": 0, "j_start": 0, "verify_margin": 5}
    assert report["results"][0]["coeffs"] == ["1", "16", "16", "1"]


def test_class_oracle_range_error(capsys):
    code, _, err = run(capsys, "class", "--n", "100", "--method", "strata")
    assert code == 2 and "n_max_oracle" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["class"])
    assert info.value.code == 2
    assert run(capsys, "class", "--n", "3:5")[0] == 2
    assert run(capsys, "scan", "--n-max", "4", "--jobs", "0")[0] == 2


def test_class_cache_cross_check(tmp_path, capsys):
    path = tmp_path / "c.txt"
    assert run(capsys, "class", "--n", "6", "--cache", str(path))[0] == 0
    assert path.read_text() == "MBARCACHE v1\n6: 1,16,16,1\n"
    path.write_text("MBARCACHE v1\n6: 1,17,17,1\n")
    assert run(capsys, "class", "--n", "6", "--cache", str(path))[0] == 3


def test_cache_from_environment(tmp_path, capsys, monkeypatch):
    path = tmp_path / "env.txt"
    monkeypatch.setenv("MBAR_CACHE", str(path))
    assert run(capsys, "class", "--n", "5")[0] == 0
    assert path.read_text() == "MBARCACHE v1\n5: 1,5,1\n"


def test_betti_csv(capsys):
    code, out, _ = run(capsys, "betti", "--n", "5", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["n,l,rank,binomial,normalized_rank", "5,0,1,1,1", "5,1,5,2,5/2", "5,2,1,1,1"]


@pytest.mark.parametrize("method", ["stirling", "cnki", "strata"])
def test_betti_methods(capsys, method):
    code, out, _ = run(capsys, "betti", "--n", "3:7", "--method", method)
    assert code == 0
    assert out.splitlines()[-1] == "7: 1 42 127 42 1"


@pytest.mark.parametrize("check", ["ulc", "realroot", "symmetry", "unimodal"])
def test_checks_pass(capsys, check):
    assert run(capsys, "check", check, "--n-max", "8")[0] == 0


def test_check_realroot_small(capsys):
    code, out, _ = run(capsys, "check", "realroot", "--n-max", "6")
    assert code == 0 and out.count("ok") == 4


def test_check_injected_violation(capsys):
    code, out, _ = run(capsys, "check", "ulc", "--table", "1,1,10,1,1")
    assert code == 1
    report = json.loads(out)
    assert [f["n"] for f in report["findings"]] == [7]
    assert "l=2" in report["findings"][0]["violation"]


def test_check_injected_asymmetric(capsys):
    code, out, _ = run(capsys, "check", "symmetry", "--table", "1,2,3,1")
    assert code == 1 and "palindromic" in out


def test_asymptotic(capsys):
    code, out, _ = run(capsys, "asymptotic", "--l", "0", "--n", "10:100:10", "--format", "json")
    report = json.loads(out)
    assert code == 0 and all(e["ratio"] == "1" for e in report["results"]["entries"])
    assert run(capsys, "asymptotic", "--l", "30", "--n", "40")[0] == 2
    assert run(capsys, "asymptotic", "--l", "2", "--n", "50:400:50")[0] == 2


def test_asymptotic_outside_window(capsys):
    code, out, _ = run(capsys, "asymptotic", "--l", "2", "--n", "50:400:50", "--no-range-check", "--format", "json")
    entries = json.loads(out)["results"]["entries"]
    errs = [float(e["ratio_minus_one_float"]) for e in entries]
    assert code == 0 and all(a > b for a, b in zip(errs, errs[1:]))
    assert entries[0]["in_log_window"] is False and entries[1]["in_log_window"] is True


def test_probe_constants(capsys):
    code, out, _ = run(capsys, "probe-constants", "--n", "4:10", "--k-max", "3", "--i-max", "3", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["results"]["proof_bounds_hold"] is True
    assert report["findings"] == []


def test_scan_cache_and_determinism(tmp_path, capsys):
    c1, c2 = tmp_path / "a.txt", tmp_path / "b.txt"
    code, out1, _ = run(capsys, "scan", "--n-max", "12", "--jobs", "4", "--cache", str(c1), "--format", "json")
    assert code == 0
    lines = c1.read_text().splitlines()
    assert lines[0] == "MBARCACHE v1" and len(lines) == 11
    first = c1.read_bytes()
    assert run(capsys, "scan", "--n-max", "12", "--jobs", "4", "--cache", str(c1), "--format", "json")[1] == out1
    assert c1.read_bytes() == first
    code, out2, _ = run(capsys, "scan", "--n-max", "12", "--jobs", "1", "--cache", str(c2), "--format", "json")
    assert code == 0 and out2 == out1 and c2.read_bytes() == first
    csv1 = run(capsys, "scan", "--n-max", "9", "--jobs", "3", "--format", "csv")[1]
    csv2 = run(capsys, "scan", "--n-max", "9", "--jobs", "1", "--format", "csv")[1]
    assert csv1 == csv2


def test_scan_corrupt_cache(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("NOT A CACHE\n")
    assert run(capsys, "scan", "--n-max", "6", "--cache", str(path))[0] == 3
