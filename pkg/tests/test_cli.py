import json

import pytest

from inertia.cli import build_parser, load_config, main

SYNTH = ["synth", "--n-plants", "8", "--zero-fraction", "0.25", "--n-periods", "240"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def data_dir(tmp_path, capsys):
    code, _, _ = run(capsys, *SYNTH, "--seed", 3, "--out", tmp_path / "data")
    assert code == 0
    return tmp_path / "data"


def test_synth(data_dir, tmp_path, capsys):
    code, out, _ = run(capsys, *SYNTH, "--seed", 3, "--out", tmp_path / "again")
    summary = json.loads(out)

    assert code == 0
    assert summary["nonzero"] == 6
    for name in ("positions.csv", "actions.csv", "ground_truth.csv"):
        again = tmp_path / "again" / name
        assert (data_dir / name).read_bytes() == again.read_bytes()


def test_fit(data_dir, tmp_path, capsys, subtests):
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "fit", "--data-dir", data_dir, "--out", out_dir)
    summary = json.loads(out)
    model = json.loads((out_dir / "model.json").read_text(encoding="utf-8"))

    with subtests.test(msg="exit"):
        assert code == 0
    with subtests.test(msg="sparsity"):
        assert model["diagnostics"]["n_nonzero"] == 6
        assert summary["n_nonzero"] == 6
        assert summary["warnings"] == []
    with subtests.test(msg="reports"):
        report = (out_dir / "plants_report.csv").read_text(encoding="utf-8")
        assert report.startswith("plant_id,fuel,w_gvas,h_seconds\n")
        assert (out_dir / "fuel_summary.csv").is_file()


def test_fit_lambda_zero_is_exact(data_dir, tmp_path, capsys):
    code, out, _ = run(
        capsys, "fit", "--data-dir", data_dir, "--out", tmp_path / "o", "--lambda", 0
    )
    assert code == 0
    assert json.loads(out)["exact"] is True


def test_fit_missing_demand(data_dir, tmp_path, capsys):
    (data_dir / "demand.csv").unlink()
    code, _, err = run(capsys, "fit", "--data-dir", data_dir, "--out", tmp_path / "o")
    assert code == 2
    assert "demand.csv" in err


def test_fit_exact_over_limit(data_dir, tmp_path, capsys):
    code, _, err = run(
        capsys,
        "fit",
        "--data-dir",
        data_dir,
        "--out",
        tmp_path / "o",
        "--mode",
        "exact",
        "--exact-limit",
        3,
        "--lambda",
        1,
    )
    assert code == 2
    assert "heuristic" in err


def test_round_trip_is_byte_identical(tmp_path, capsys):
    outputs = []
    for attempt in ("a", "b"):
        root = tmp_path / attempt
        assert run(capsys, *SYNTH, "--seed", 11, "--out", root / "data")[0] == 0
        assert run(capsys, "fit", "--data-dir", root / "data", "--out", root)[0] == 0
        code, out, _ = run(
            capsys,
            "predict",
            "--model",
            root / "model.json",
            "--data-dir",
            root / "data",
            "--out",
            root,
        )
        assert code == 0
        assert "evaluation" in json.loads(out)
        outputs.append(root)

    a, b = outputs
    for name in ("model.json", "forecast.csv", "plants_report.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_predict_without_actuals(data_dir, tmp_path, capsys):
    assert run(capsys, "fit", "--data-dir", data_dir, "--out", tmp_path)[0] == 0
    (data_dir / "market_inertia.csv").unlink()

    code, out, _ = run(
        capsys,
        "predict",
        "--model",
        tmp_path / "model.json",
        "--data-dir",
        data_dir,
        "--out",
        tmp_path,
        "--trigger-gvas",
        0.001,
    )
    document = json.loads(out)
    assert code == 0
    assert "evaluation" not in document
    assert document["low_periods"] == []
    assert (tmp_path / "forecast.csv").is_file()


def test_predict_schema_version(data_dir, tmp_path, capsys):
    model = tmp_path / "model.json"
    model.write_text('{"schema_version": 99}', encoding="utf-8")

    code, _, err = run(
        capsys, "predict", "--model", model, "--data-dir", data_dir, "--out", tmp_path
    )
    assert code == 3
    assert "schema_version" in err


@pytest.fixture
def candidates(write_csv):
    return write_csv(
        "candidates.csv",
        """
        plant_id,kind,w_gvas,cost,notice_minutes,ramp_mw_per_min,stable_export_mw,currently_on
        T_CARR-1,keep_running,3.4,10,0,10,300,true
        T_CARR-2,keep_running,3.4,10,0,10,300,true
        T_DINO-1,start,7.7,30,30,50,300,false
        """,
    )


def test_anticipate(candidates, tmp_path, capsys):
    code, out, _ = run(
        capsys,
        "anticipate",
        "--candidates",
        candidates,
        "--baseline",
        125.6,
        "--out",
        tmp_path,
    )
    plan = json.loads(out)

    assert code == 0
    assert plan["feasible"]
    assert len(plan["selected"]) == 3
    assert json.loads((tmp_path / "plan.json").read_text(encoding="utf-8")) == plan


def test_anticipate_exit_codes(candidates, write_csv, tmp_path, capsys):
    args = ["anticipate", "--candidates", candidates, "--out", tmp_path]

    code, out, _ = run(capsys, *args, "--baseline", 150)
    assert code == 0
    assert json.loads(out)["selected"] == []

    code, out, _ = run(capsys, *args, "--baseline", 100)
    assert code == 4
    assert json.loads(out)["feasible"] is False

    code, _, _ = run(capsys, *args, "--baseline", 125.6, "--lead-minutes", 10)
    assert code == 4

    broken = write_csv("broken.csv", "plant_id,kind\nT_A,stop\n")
    code, _, err = run(
        capsys, "anticipate", "--candidates", broken, "--baseline", 1, "--out", tmp_path
    )
    assert code == 2


def test_config_file(data_dir, tmp_path, capsys):
    config = tmp_path / "run.yaml"
    config.write_text(f"data_dir: {data_dir}\nlambda: 0.0\n", encoding="utf-8")

    code, out, _ = run(capsys, "fit", "--config", config, "--out", tmp_path / "o")
    assert code == 0
    assert json.loads(out)["lambda"] == 0.0

    code, out, _ = run(
        capsys, "fit", "--config", config, "--out", tmp_path / "o", "--lambda", 0.1
    )
    assert json.loads(out)["lambda"] == 0.1


def test_invalid_settings(tmp_path, capsys):
    code, _, err = run(capsys, "synth", "--n-plants", 0, "--out", tmp_path)
    assert code == 2
    assert "invalid settings" in err


def test_lambda_tie_rtol_flag(tmp_path, capsys):
    args = build_parser().parse_args(["fit", "--lambda-tie-rtol", "0"])
    assert load_config(args).lambda_tie_rtol == 0.0
    assert load_config(build_parser().parse_args(["fit"])).lambda_tie_rtol == 1e-3

    code, _, err = run(capsys, "fit", "--lambda-tie-rtol", -1, "--out", tmp_path)
    assert code == 2
    assert "invalid settings" in err
