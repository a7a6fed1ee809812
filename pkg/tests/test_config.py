import pathlib

import pydantic
import pytest

from inertia.config import RunConfig
from inertia.estimator import SolveMode
from inertia.exceptions import InvalidArgumentError, MissingFileError


def test_defaults():
    config = RunConfig()
    assert config.lam is None
    assert config.trigger_gvas == 140.0
    assert config.lead_minutes is None
    assert config.lambda_tie_rtol == 1e-3
    assert config.mode is SolveMode.AUTO
    assert config.scenario.n_plants == 50


def test_from_file_and_overrides(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "data_dir: data\n"
        "lambda: 0.3\n"
        "mode: heuristic\n"
        "scenario:\n"
        "  n_plants: 12\n"
        "  noise_sigma: 1.0\n",
        encoding="utf-8",
    )
    base = RunConfig.from_file(path)
    assert base.lam == 0.3
    assert base.scenario.n_plants == 12

    merged = RunConfig.merged(
        base, {"lambda": None, "mode": "exact", "scenario": {"n_plants": 20}}
    )
    assert merged.lam == 0.3
    assert merged.mode is SolveMode.EXACT
    assert merged.scenario.n_plants == 20
    assert merged.scenario.noise_sigma == 1.0


def test_json_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"trigger_gvas": 150, "lead_minutes": 45}', encoding="utf-8")
    config = RunConfig.from_file(path)
    assert config.trigger_gvas == 150.0
    assert config.lead_minutes == 45.0


def test_bad_files(tmp_path):
    with pytest.raises(MissingFileError):
        RunConfig.from_file(tmp_path / "missing.yaml")

    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(InvalidArgumentError):
        RunConfig.from_file(path)

    path.write_text("lamda: 1\n", encoding="utf-8")
    with pytest.raises(pydantic.ValidationError):
        RunConfig.from_file(path)


@pytest.mark.parametrize(
    "values",
    [
        {"trigger_gvas": 0},
        {"agreement": 0.5},
        {"validation_split": 1.0},
        {"lambda_grid": []},
    ],
)
def test_invalid_values(values):
    with pytest.raises(pydantic.ValidationError):
        RunConfig(**values)


def test_paths(tmp_path):
    (tmp_path / "actions.csv").write_text("", encoding="utf-8")
    config = RunConfig(data_dir=tmp_path, demand=pathlib.Path("elsewhere.csv"))

    assert config.required("positions") == tmp_path / "positions.csv"
    assert config.required("demand") == pathlib.Path("elsewhere.csv")
    assert config.optional("actions") == tmp_path / "actions.csv"
    assert config.optional("plants") is None

    with pytest.raises(MissingFileError):
        RunConfig().required("positions")
