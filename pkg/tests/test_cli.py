"""CLI surface: formats, flags, determinism, config round-trip."""

import json

import pytest

from modsymdist.cli import RunConfig, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_enumerate_hand_count(capsys):
    code, out = run_cli(capsys, "enumerate", "--N", "11", "--T", "122")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "c,d,norm"
    assert len(lines) == 4  # header + 3 rows
    assert lines[1].startswith("0,1,")
    assert lines[2].startswith("11,-1,") and lines[3].startswith("11,1,")


def test_enumerate_uses_curve_conductor(capsys):
    code, out = run_cli(capsys, "enumerate", "--curve", "37a", "--T", "1370")
    assert code == 0
    rows = out.strip().split("\n")[1:]
    assert all(r.split(",")[0] in ("0", "37") for r in rows)


def test_enumerate_json_format(capsys):
    code, out = run_cli(capsys, "enumerate", "--N", "11", "--T", "122", "--format", "json")
    assert code == 0
    recs = json.loads(out)
    assert recs == [
        {"c": 0, "d": 1, "norm": 1.0},
        {"c": 11, "d": -1, "norm": 122.0},
        {"c": 11, "d": 1, "norm": 122.0},
    ]


def test_coeffs_csv(capsys):
    code, out = run_cli(capsys, "coeffs", "--curve", "11a", "--n-max", "10")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,a_n"
    assert lines[1] == "1,1"
    assert lines[2] == "2,-2"
    assert lines[10] == "10,-2"


def test_symbols_csv_header_and_identity(capsys):
    code, out = run_cli(capsys, "symbols", "--curve", "11a", "--T", "500", "--tol", "1e-10")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "c,d,norm,re_symbol,im_symbol,err_bound"
    assert lines[1].startswith("0,1,1.0,0.0,0.0")
    assert len(lines) > 2


def test_sums_csv_and_thread_determinism(capsys):
    args = ["sums", "--curve", "11a", "--weight", "abs2:1", "--T-grid", "1000,4000", "--tol", "1e-9"]
    code1, out1 = run_cli(capsys, *args, "--threads", "1")
    code4, out4 = run_cli(capsys, *args, "--threads", "4")
    assert code1 == code4 == 0
    assert out1 == out4  # byte-identical across thread counts
    lines = out1.strip().split("\n")
    assert lines[0] == "T,count,re_value,im_value,mode,theory_leading_re,theory_leading_im"
    assert len(lines) == 3
    assert ",sharp," in lines[1]


def test_sums_smoothed_mode(capsys):
    code, out = run_cli(
        capsys, "sums", "--curve", "11a", "--weight", "one", "--T", "1000", "--smooth-U", "10",
        "--tol", "1e-9",
    )
    assert code == 0
    assert "smoothed(U=10)" in out


def test_sums_rejects_bad_weight(capsys):
    code = main(["sums", "--curve", "11a", "--weight", "bogus", "--T", "100"])
    assert code == 1


def test_moments_csv(capsys):
    code, out = run_cli(
        capsys, "moments", "--curve", "11a", "--T", "20000", "--nmax", "2", "--mmax", "2",
        "--tol", "1e-9",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,m,empirical,gaussian_limit"
    assert lines[1].startswith("0,0,1.0,1.0")
    assert len(lines) == 10  # header + 3x3 moment pairs


def test_histogram_csv(capsys):
    code, out = run_cli(
        capsys, "histogram", "--curve", "11a", "--T", "20000", "--component", "re",
        "--bins", "5", "--range=-3,3", "--tol", "1e-9",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "bin_lo,bin_hi,count,expected"
    assert len(lines) == 6


def test_petersson_json(capsys):
    code, out = run_cli(capsys, "petersson", "--curve", "11a", "--X", "5000")
    assert code == 0
    rows = json.loads(out)
    assert [r["method"] for r in rows] == ["rankin", "lattice"]
    assert abs(rows[0]["value"] / rows[1]["value"] - 1) < 0.05


def test_petersson_unknown_degree_rankin_only(capsys):
    # explicit curve record: no preset degree, so no lattice estimate
    code, out = run_cli(capsys, "petersson", "--curve", "0,-1,1,-10,-20,11", "--X", "5000")
    assert code == 0
    rows = json.loads(out)
    assert [r["method"] for r in rows] == ["rankin"]


def test_eisenstein_json(capsys):
    code, out = run_cli(
        capsys, "eisenstein", "--curve", "11a", "--m", "1", "--n", "0",
        "--s-re", "2", "--T-max", "20000", "--tol", "1e-9",
    )
    assert code == 0
    rec = json.loads(out)
    assert rec["m"] == 1 and rec["n"] == 0
    assert rec["tail_estimate"] >= 0
    assert rec["count"] > 1000


def test_eisenstein_rejects_low_s(capsys):
    code = main(["eisenstein", "--curve", "11a", "--s-re", "0.9", "--T-max", "2000"])
    assert code == 1


def test_config_roundtrip():
    cfg = RunConfig(curve="37a", T=5e4, T_grid=[1e3, 1e4], z=(0.25, 2.0), tol=1e-8,
                    threads=4, fmt="json", seed=99)
    assert RunConfig.from_json(cfg.to_json()) == cfg


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(z=(0.0, -1.0))
    with pytest.raises(ValueError):
        RunConfig(T=0.5)
    with pytest.raises(ValueError):
        RunConfig(fmt="xml")


def test_unknown_subcommand_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_moments_guard_rejects_T_below_1():
    assert main(["moments", "--curve", "11a", "--T", "0.5"]) == 1


def test_sums_first_moment_theory_column(capsys):
    code, out = run_cli(
        capsys, "sums", "--curve", "11a", "--weight", "f:1,0", "--T", "2000", "--tol", "1e-9"
    )
    assert code == 0
    row = out.strip().split("\n")[1].split(",")
    assert float(row[5]) == pytest.approx(0.0018639532246330695 / (4 * 3.141592653589793), rel=1e-6)


def test_verify_quick_exit_zero_and_deterministic(capsys):
    code1, out1 = run_cli(capsys, "verify", "--curve", "11a", "--quick", "--threads", "1")
    assert code1 == 0
    lines = [l for l in out1.strip().split("\n") if l[:4] in ("PASS", "FAIL", "SKIP")]
    assert len(lines) == 13
    assert not any(l.startswith("FAIL") for l in lines)
    code8, out8 = run_cli(capsys, "verify", "--curve", "11a", "--quick", "--threads", "8")
    assert code8 == 0
    assert out8 == out1  # byte-identical verify transcript across thread counts


def test_out_file(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code = main(["enumerate", "--N", "11", "--T", "122", "--out", str(target)])
    assert code == 0
    text = target.read_text()
    assert text.startswith("c,d,norm\n")
    assert text.endswith("\n")
