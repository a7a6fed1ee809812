import pathlib
import textwrap

import pytest

from inertia import synth


@pytest.fixture
def here():
    return pathlib.Path(__file__).parent


@pytest.fixture
def cwd(here):
    return here.parent


@pytest.fixture
def write_csv(tmp_path):
    """Write dedented CSV text under tmp_path and return the path."""

    def write(name: str, text: str) -> pathlib.Path:
        path = tmp_path.joinpath(name)
        path.write_text(textwrap.dedent(text).lstrip(), encoding="utf-8")
        return path

    return write


@pytest.fixture
def small_config():
    return synth.ScenarioConfig(
        n_plants=8, zero_fraction=0.25, n_periods=240, duty_cycle=0.6, seed=3
    )


@pytest.fixture
def small_scenario(small_config):
    return synth.generate(small_config)
