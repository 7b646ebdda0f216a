import json
import math

import pytest

from qexpander.cli import (
    ExperimentConfig,
    SWEEP_HEADER,
    build_channel,
    format_record,
    main,
    merge_config,
    parse_config_file,
    run_sweep,
    write_sweep_csv,
)
from qexpander.errors import NumericalError, ValidationError
from qexpander.matrixcore import SeededRng


def mask_wall_ms(text: str) -> list[str]:
    return [",".join(line.split(",")[:9]) for line in text.splitlines()]


def test_sweep_csv_header_and_determinism(tmp_path):
    args = ["sweep", "--n-list", "8,10", "--d", "4", "--trials", "2", "--seed", "3"]
    a_dir, b_dir = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a_dir)]) == 0
    assert main(args + ["--out", str(b_dir)]) == 0
    a = (a_dir / "sweep.csv").read_text()
    b = (b_dir / "sweep.csv").read_text()
    assert a.splitlines()[0] == SWEEP_HEADER
    assert mask_wall_ms(a) == mask_wall_ms(b)
    assert len(a.splitlines()) == 1 + 4


def test_sweep_worker_pool_matches_serial(tmp_path):
    base = ["sweep", "--n-list", "8,10", "--trials", "2", "--seed", "5"]
    s_dir, p_dir = tmp_path / "serial", tmp_path / "pool"
    assert main(base + ["--out", str(s_dir)]) == 0
    assert main(base + ["--out", str(p_dir), "--workers", "4"]) == 0
    serial = mask_wall_ms((s_dir / "sweep.csv").read_text())
    pooled = mask_wall_ms((p_dir / "sweep.csv").read_text())
    assert serial == pooled


def test_sweep_gap_ok_and_benchmarks(tmp_path):
    out = tmp_path / "s"
    assert main(["sweep", "--n-list", "12", "--trials", "3", "--seed", "1", "--out", str(out)]) == 0
    rows = [line.split(",") for line in (out / "sweep.csv").read_text().splitlines()[1:]]
    for row in rows:
        assert row[3] == "hermitian"
        assert abs(float(row[5]) - 2 * math.sqrt(3) / 4) < 1e-10
        assert abs(float(row[6]) - 0.5) < 1e-10
        assert float(row[4]) >= float(row[7]) - 1e-9
        assert row[8] == "true"
        assert float(row[9]) > 0
    assert [r[2] for r in rows] == ["0", "1", "2"]  # per-trial seed streams


def test_sweep_nonhermitian_rows_have_no_bound(tmp_path):
    out = tmp_path / "nh"
    code = main(
        ["sweep", "--n-list", "8", "--trials", "2", "--construction", "nonhermitian",
         "--d", "3", "--seed", "2", "--out", str(out)]
    )
    assert code == 0
    rows = [line.split(",") for line in (out / "sweep.csv").read_text().splitlines()[1:]]
    for row in rows:
        assert row[3] == "nonhermitian"
        assert row[7] == "nan"
        assert row[8] == ""


def test_sweep_weighted_construction(tmp_path):
    out = tmp_path / "w"
    assert main(["sweep", "--n-list", "10", "--construction", "weighted",
                 "--seed", "4", "--out", str(out)]) == 0
    row = (out / "sweep.csv").read_text().splitlines()[1].split(",")
    assert row[3] == "weighted"
    assert row[8] == "true"


def test_config_file_merging(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nN_list = 8,10\nD = 4\ntrials = 1\nmaster_seed = 9\n")
    values = parse_config_file(cfg)
    assert values["N_list"] == "8,10" and values["master_seed"] == "9"

    class Args:
        config = str(cfg)
        construction = None
        n_list = None
        d = None
        trials = 2  # CLI flag wins over the file
        seed = None
        out = None
        m_max = None

    config = merge_config(Args())
    assert config.N_list == (8, 10)
    assert config.trials == 2
    assert config.master_seed == 9


def test_config_file_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("unknown_key = 1\n")
    with pytest.raises(ValidationError):
        parse_config_file(cfg)


def test_config_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig("hermitian", (99,), 4, 1, 0, ".", 20)  # N over ceiling
    with pytest.raises(ValidationError):
        ExperimentConfig("hermitian", (8,), 3, 1, 0, ".", 20)  # odd D
    with pytest.raises(ValidationError):
        ExperimentConfig("weird", (8,), 4, 1, 0, ".", 20)
    with pytest.raises(ValidationError):
        ExperimentConfig("hermitian", (8,), 4, 0, 0, ".", 20)  # no trials
    ExperimentConfig("nonhermitian", (8,), 2, 1, 0, ".", 20)  # D=2 fine here


def test_exit_code_validation_error(tmp_path, capsys):
    code = main(["spectrum", "--n", "99", "--out", str(tmp_path)])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_exit_code_numerical_error(capsys):
    code = main(["sd", "eval", "tr(U1 U1 U1 U1) tr(U1' U1' U1' U1')",
                 "--series", "--n", "16", "--budget", "5"])
    assert code == 3
    assert "budget" in capsys.readouterr().err


def test_spectrum_command_outputs(tmp_path, capsys):
    assert main(["spectrum", "--n", "8", "--d", "4", "--seed", "1", "--out", str(tmp_path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["N"] == 8 and report["D"] == 4
    assert 0 < report["lambda2"] < 1
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "rank,a_over_N2,eig_re,eig_im,eig_abs"
    assert len(lines) == 1 + 64


def test_collapse_command_outputs(tmp_path, capsys):
    code = main(["collapse", "--n-list", "8,12", "--seed", "2", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert "8-12" in report["quantile_distances"]
    lines = (tmp_path / "collapse.csv").read_text().splitlines()
    assert lines[0] == "N,a_over_N2,eig"
    assert len(lines) == 1 + 64 + 144
    svg = (tmp_path / "collapse.svg").read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 2


def test_moments_command(capsys):
    assert main(["moments", "--n", "8", "--d", "4", "--seed", "1", "--m-list", "2,4"]) == 0
    report = json.loads(capsys.readouterr().out)
    moments = report["moments"]
    assert [row["m"] for row in moments] == [2, 4]
    for row in moments:
        assert row["moment_trace"] > 1
        assert row["frobenius_moment"] >= 1
    # hermitian identity: tr(S^4) = frobenius at m=2
    assert abs(moments[1]["moment_trace"] - moments[0]["frobenius_moment"]) < 1e-8


def test_moments_nonhermitian_skips_trace_route(capsys):
    assert main(["moments", "--n", "8", "--d", "3", "--construction", "nonhermitian",
                 "--m-list", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    row = report["moments"][0]
    assert row["moment_trace"] is None
    assert row["frobenius_moment"] >= 1


def test_cayley_command_stdout(capsys):
    assert main(["cayley", "--d", "4", "--m-max", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "D,m,l,count"
    assert "4,2,0,4" in lines
    assert "4,4,0,28" in lines


def test_cayley_command_file(tmp_path, capsys):
    assert main(["cayley", "--d", "6", "--m-max", "2", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "cayley.csv").read_text().splitlines()
    assert lines[0] == "D,m,l,count"
    assert "6,2,0,6" in lines


def test_sd_eval_exact(capsys):
    assert main(["sd", "eval", "tr(U1 U2 U1' U2')", "--exact", "--n", "16"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["rational"] == "1/N"
    assert report["value"] == pytest.approx(1 / 16)


def test_sd_eval_identity_trace_scales_by_n(capsys):
    assert main(["sd", "eval", "tr(U1 U1')", "--exact", "--n", "4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["rational"] == "N"
    assert report["value"] == pytest.approx(4.0)
    assert report["tr1_factors"] == 1


def test_sd_eval_series(capsys):
    assert main(["sd", "eval", "tr(U1 U1) tr(U1' U1')", "--series", "--n", "16",
                 "--levels", "8"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == pytest.approx(2.0)
    assert report["level_sums"][0] == "2"


def test_sd_eval_mc(capsys):
    assert main(["sd", "eval", "tr(U1) tr(U1')", "--mc", "--n", "8",
                 "--samples", "1000", "--seed", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert abs(report["estimate"] - 1.0) <= 4 * report["stderr"]


def test_sd_eval_mode_conflict(capsys):
    code = main(["sd", "eval", "tr(U1)", "--exact", "--mc", "--n", "8"])
    assert code == 2


def test_sd_eval_parse_error_exit_2(capsys):
    assert main(["sd", "eval", "tr(", "--exact"]) == 2


def test_edge_command(capsys):
    assert main(["edge", "--n", "10", "--d", "4", "--seed", "2", "--projectors", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["min_slack"] >= -1e-8
    assert report["chain"]["holds"] is True
    assert report["chain"]["lhs"] <= report["chain"]["rhs"] + 1e-8


def test_run_sweep_records_errors_and_continues(monkeypatch, capsys):
    calls = {"n": 0}

    import qexpander.cli as cli_mod

    real = cli_mod.eigen_spectrum

    def flaky(chan, *a, **k):
        calls["n"] += 1
        if calls["n"] == 1:
            raise NumericalError("synthetic failure")
        return real(chan, *a, **k)

    monkeypatch.setattr(cli_mod, "eigen_spectrum", flaky)
    config = ExperimentConfig("hermitian", (8,), 4, 2, 0, ".", 20)
    records, _ = run_sweep(config)
    assert len(records) == 2
    assert records[0].error == "synthetic failure"
    assert math.isnan(records[0].lambda2)
    assert records[1].error is None
    line = format_record(records[0])
    assert line.split(",")[4] == "nan"


def test_build_channel_weighted_weights_paired():
    chan = build_channel("weighted", 8, 6, SeededRng(3))
    assert chan.hermitian
    w = chan.weights
    assert abs(sum(w) - 1) < 1e-12
    for s in range(3):
        assert w[s] == w[s + 3]


def test_write_sweep_csv_round_trip(tmp_path):
    config = ExperimentConfig("hermitian", (8,), 4, 1, 0, ".", 20)
    records, _ = run_sweep(config)
    path = tmp_path / "sweep.csv"
    write_sweep_csv(records, path)
    lines = path.read_text().splitlines()
    assert lines[0] == SWEEP_HEADER
    assert len(lines) == 2
