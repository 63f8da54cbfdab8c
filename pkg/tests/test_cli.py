import json

import pytest

from polytheta.cli import VERIFIERS, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_count_polygonal_range(capsys):
    code, out = run_cli(capsys, "count", "--m", "6", "--alpha", "1,1,1,1",
                        "--n", "0..5", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema_version"] == 1
    rows = {r["n"]: r for r in data["rows"]}
    assert rows[0]["r"] == 1
    assert rows[1]["r"] == 4
    # completed-square columns agree with the polygonal ones
    assert rows[3]["s"] == rows[3]["r"]
    assert rows[3]["s_star"] == rows[3]["r_star"]


def test_count_jacobi_example(capsys):
    code, out = run_cli(capsys, "count", "--m", "4", "--alpha", "1,1,1,1",
                        "--domain", "all", "--n", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["rows"][0]["r_star"] == 8


def test_count_squares_example(capsys):
    code, out = run_cli(capsys, "count", "--squares", "--r", "1", "--M", "2",
                        "--alpha", "1,1,1,1", "--n", "4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["rows"][0]["s_star"] == 16


def test_count_table_format(capsys):
    code, out = run_cli(capsys, "count", "--m", "6", "--n", "0..3")
    assert code == 0
    assert out.splitlines()[0].split()[:3] == ["n", "r", "r_plus"]


def test_verify_unknown_name(capsys):
    code = main(["verify", "nope"])
    assert code == 2


def test_verify_known_names_cover_spec_list():
    expected = {"lemma2_2", "lemma2_3", "lemma2_4", "lemma3_1", "lemma4_1",
                "lemma4_2", "lemma5_1", "lemma5_4", "lemma5_5", "lemma5_8",
                "lemma6_2", "theta_split", "cor1_2", "cor1_3", "cor1_4"}
    assert expected == set(VERIFIERS)


@pytest.mark.parametrize("name,args", [
    ("lemma2_3", ["--r", "1", "--M", "2", "--alpha", "1,1,1,1",
                  "--order", "120"]),
    ("lemma2_2", ["--m", "6", "--order", "40"]),
    ("lemma2_4", ["--m", "6", "--order", "40"]),
    ("lemma3_1", ["--N", "40"]),
    ("lemma6_2", ["--N", "40"]),
    ("theta_split", ["--order", "200"]),
    ("lemma5_4", []),
    ("lemma5_5", []),
])
def test_verify_fast_identities_pass(capsys, name, args):
    code, out = run_cli(capsys, "verify", name, "--format", "json", *args)
    assert code == 0, out
    data = json.loads(out)
    assert data["rows"][0]["passed"] is True


def test_verify_lemma5_1_grid(capsys):
    code, out = run_cli(capsys, "verify", "lemma5_1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["rows"][0]["worst_error"] < 1e-6


def test_verify_transformation_small_grid(capsys):
    code, out = run_cli(capsys, "verify", "lemma4_1", "--N", "8",
                        "--k-max", "4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["rows"][0]["worst_error"] < 1e-8


def test_determinism_byte_identical(capsys):
    _, out1 = run_cli(capsys, "count", "--m", "5", "--n", "0..40",
                      "--format", "csv")
    _, out2 = run_cli(capsys, "count", "--m", "5", "--n", "0..40",
                      "--format", "csv")
    assert out1 == out2


def test_contour_const(capsys):
    code, out = run_cli(capsys, "contour", "--series", "const", "--n", "0")
    assert code == 0
    data = json.loads(out)
    assert abs(data["value_re"] - 1.0) < 1e-8
    assert data["abs_err"] < 1e-8


def test_contour_direct_product(capsys):
    code, out = run_cli(capsys, "contour", "--r", "1", "--M", "2",
                        "--alpha", "1,1,1,1", "--J", "1,2,3,4",
                        "--n", "10", "--mode", "direct",
                        "--tol-report", "1e-6")
    assert code == 0
    data = json.loads(out)
    assert data["abs_err"] <= 1e-6
    assert data["exact"] == 12.0


def test_contour_transformed(capsys):
    code, out = run_cli(capsys, "contour", "--r", "1", "--M", "2",
                        "--alpha", "1,1,1,1", "--J", "1,2,3",
                        "--n", "6", "--mode", "transformed")
    assert code == 0
    data = json.loads(out)
    assert data["abs_err"] <= 1e-4


def test_asymptotics_report(tmp_path, capsys):
    out_file = tmp_path / "hex.csv"
    code, out = run_cli(capsys, "asymptotics", "--which", "hexagonal",
                        "--nmax", "3000", "--out", str(out_file))
    assert code == 0
    data = json.loads(out)
    assert data["fitted_exponent"] < 1.0
    header = out_file.read_text().splitlines()[0]
    assert header == "n,exact_count,main_term,residual,normalized_residual"


def test_asymptotics_squares_family(capsys):
    # one-sided vs one-sixteenth-unrestricted on the all-odd four-square family
    code, out = run_cli(capsys, "asymptotics", "--which", "squares",
                        "--nmax", "20000", "--max-rows", "40")
    assert code == 0
    data = json.loads(out)
    assert data["fitted_exponent"] < 1.0
    ratios = [r["exact_count"] / r["main_term"] for r in data["rows"][-5:]
              if r["main_term"]]
    assert all(abs(x - 1) < 0.25 for x in ratios)


def test_asymptotics_spot_check_with_checkpoint(tmp_path, capsys):
    ck = tmp_path / "spot.csv"
    code, out = run_cli(capsys, "asymptotics", "--which", "pentagonal",
                        "--nmax", "2000", "--spot-check", "8",
                        "--checkpoint", str(ck), "--workers", "2")
    assert code == 0
    data = json.loads(out)
    assert data["spot_check"]["samples"] == 8
    assert data["spot_check"]["mismatches"] == []
    first = ck.read_text()
    # resumed run reuses the checkpoint rather than appending duplicates
    code, out = run_cli(capsys, "asymptotics", "--which", "pentagonal",
                        "--nmax", "2000", "--spot-check", "8",
                        "--checkpoint", str(ck))
    assert code == 0
    assert ck.read_text() == first


def test_worker_cap_env(monkeypatch):
    from polytheta.cli import _worker_cap
    monkeypatch.setenv("POLYTHETA_WORKERS", "2")
    assert _worker_cap(8) == 2
    monkeypatch.delenv("POLYTHETA_WORKERS")
    assert _worker_cap(3) == 3


def test_farey_dump(capsys):
    code, out = run_cli(capsys, "farey", "--N", "5")
    lines = out.strip().splitlines()
    assert lines[0] == "h,k,k1,k2,theta_left,theta_right,rho1,rho2"
    assert lines[1] == "0,1,5,5,1/6,1/6,1,1"
    assert len(lines) == 11


def test_grid_dump_lemma4_1(capsys):
    code, out = run_cli(capsys, "grid", "lemma4_1", "--N", "8", "--k-max", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("r,M,alpha_j,h,k,")
    assert "rel_err" in lines[0]
    worst = max(float(line.rsplit(",", 1)[1]) for line in lines[1:])
    assert worst < 1e-8


def test_grid_dump_lemma5_1(capsys):
    code, out = run_cli(capsys, "grid", "lemma5_1")
    assert code == 0
    lines = out.strip().splitlines()
    worst = max(float(line.rsplit(",", 1)[1]) for line in lines[1:])
    assert worst < 1e-6
