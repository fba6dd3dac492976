import csv

import pytest

from mxassist.bundled import registration_kb_text
from mxassist.cli import main


@pytest.fixture()
def kb_file(tmp_path):
    path = tmp_path / "registration.kb"
    path.write_text(registration_kb_text())
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_struct(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_check(kb_file, capsys):
    code, out, _ = run_cli(capsys, "check", "--kb", kb_file)
    assert code == 0
    assert "symbols: 5 (3 environmental, 2 decision)" in out
    assert "consistent" in out


def test_check_parse_error(tmp_path, capsys):
    path = write_struct(tmp_path, "broken.kb", "vocabulary { env A Bool }")
    code, _, err = run_cli(capsys, "check", "--kb", path)
    assert code == 2
    assert "line 1" in err


def test_solve_prints_three_models(kb_file, tmp_path, capsys):
    struct = write_struct(
        tmp_path, "env.struct",
        "SocialHousing = true\nLicensedSeller = true\nLowRent = true",
    )
    code, out, _ = run_cli(capsys, "solve", "--kb", kb_file, "--struct", struct)
    assert code == 0
    assert out.count("// model") == 3
    assert "TaxRate = 1" in out and "TaxRate = 7" in out and "TaxRate = 10" in out


def test_solve_inconsistent_state(kb_file, tmp_path, capsys):
    struct = write_struct(
        tmp_path, "bad.struct", "SocialHousing = true\nLowRent = false"
    )
    code, _, err = run_cli(capsys, "solve", "--kb", kb_file, "--struct", struct)
    assert code == 1
    assert "no models" in err


def test_propagate(kb_file, tmp_path, capsys):
    struct = write_struct(
        tmp_path, "obs.struct", "LowRent = false\nSocialHousing = false"
    )
    code, out, _ = run_cli(capsys, "propagate", "--kb", kb_file, "--struct", struct)
    assert code == 0
    assert "// decision consequences" in out
    assert "RegistrationType = Other" in out
    assert "TaxRate = 10" in out


def test_propagate_merges_obs_and_dec_structs(kb_file, tmp_path, capsys):
    obs = write_struct(tmp_path, "obs.struct", "")
    dec = write_struct(tmp_path, "dec.struct", "TaxRate = 7")
    code, out, _ = run_cli(
        capsys, "propagate", "--kb", kb_file, "--struct", obs, "--struct", dec
    )
    assert code == 0
    section = out.split("// to verify")[1].split("//")[0]
    assert "LowRent = true" in section


def test_relevance_exact(kb_file, tmp_path, capsys):
    struct = write_struct(tmp_path, "obs.struct", "LowRent = false")
    code, out, _ = run_cli(
        capsys, "relevance", "--kb", kb_file, "--struct", struct, "--mode", "exact"
    )
    assert code == 0
    lines = dict(
        (line.split()[0], line.split()[2]) for line in out.splitlines()[1:] if line
    )
    assert lines["LicensedSeller"] == "irrelevant"
    assert lines["SocialHousing"] == "irrelevant"
    assert lines["LowRent"] == "given"
    assert lines["TaxRate"] == "relevant"
    assert lines["RegistrationType"] == "relevant"


def test_simulate_single_mode_and_csv(kb_file, tmp_path, capsys):
    csv_path = str(tmp_path / "rows.csv")
    code, out, _ = run_cli(
        capsys, "simulate", "--kb", kb_file, "--runs", "3", "--seed", "9",
        "--mode", "guided", "--csv", csv_path,
    )
    assert code == 0
    assert "guided" in out
    with open(csv_path) as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 3
    assert set(rows[0]) == {"instance", "mode", "entries", "retractions", "outcome"}
    assert all(r["outcome"] == "definite" for r in rows)


def test_simulate_both_modes_prints_gain(kb_file, capsys):
    code, out, _ = run_cli(
        capsys, "simulate", "--kb", kb_file, "--runs", "3", "--seed", "9"
    )
    assert code == 0
    assert "gain" in out
    assert "average" in out


def test_simulate_deterministic(kb_file, capsys):
    _, first, _ = run_cli(capsys, "simulate", "--kb", kb_file, "--runs", "4", "--seed", "5")
    _, second, _ = run_cli(capsys, "simulate", "--kb", kb_file, "--runs", "4", "--seed", "5")
    assert first == second


def test_check_unsatisfiable_kb_exits_one(tmp_path, capsys):
    path = write_struct(
        tmp_path, "unsat.kb",
        "vocabulary { env A : Bool dec D : Bool }\n"
        "theory environment { A. ~A. }\ntheory solution { D. }",
    )
    code, out, _ = run_cli(capsys, "check", "--kb", path)
    assert code == 1
    assert "no solution" in out
