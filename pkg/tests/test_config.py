import json

import pytest

from app.setup.simulation_config import LadderSpec, SimulationConfig, parse_config, to_dict
from app.setup.system_checker import ConfigManager, SystemChecker
from app.utils.exceptions import ConfigError
from app.utils.translation_manager import TranslationManager


def test_empty_document_gives_defaults():
    config = parse_config("")

    assert config == SimulationConfig()
    assert config.grid.n_points == 1024
    assert (config.grid.z_min, config.grid.z_max) == (-8.0, 8.0)
    assert config.dt == 1e-4
    assert config.t_final == 1.0
    assert config.gradient == 3.0
    assert config.method == "spectral"
    assert config.epsilon == 1e-6
    assert config.experiment.centers[0] == -4.0
    assert config.experiment.centers[-1] == 4.0
    assert len(config.experiment.centers) == 17
    assert parse_config("{}") == config


def test_zero_gradient_is_valid():
    assert parse_config('{"gradient": 0}').gradient == 0.0


def test_shipped_config_matches_defaults():
    assert ConfigManager().config == SimulationConfig()


@pytest.mark.parametrize(
    "text, field, line",
    [
        ('{\n  "dt": -1\n}', "dt", 2),
        ('{\n  "dt": "fast"\n}', "dt", 2),
        ('{\n  "grid": {\n    "n_points": 1000\n  }\n}', "grid.n_points", 3),
        ('{\n  "grid": {"z_min": -8, "z_max": 7}\n}', "grid.z_max", 2),
        ('{\n  "method": "euler"\n}', "method", 2),
        ('{\n  "t_final": 1.0,\n  "dt": 0.3\n}', "t_final", 2),
        ('{\n  "epsilon": 0\n}', "epsilon", 2),
        ('{\n  "output": {"precision": 40}\n}', "output.precision", 2),
        ('{\n  "experiment": {"axis": [1, 1, 0]}\n}', "experiment.axis", 2),
        ('{\n  "experiment": {"shots": 1.5}\n}', "experiment.shots", 2),
        ('{\n  "converge": {\n    "implicit": {"dts": [-0.3]}\n  }\n}', "converge.implicit.dts[0]", 3),
        ('{\n  "converge": {"spectral": {"n_points": [1000]}}\n}', "converge.spectral.n_points[0]", 2),
        ('{\n  "converge": {"spectral": {"z_max": -1}}\n}', "converge.spectral.z_max", 2),
        ('{\n  "epsilon": 1.5\n}', "epsilon", 2),
        ('{\n  "converge": {"workers": 0}\n}', "converge.workers", 2),
    ],
)
def test_invalid_values_name_field_and_line(text, field, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)

    assert info.value.field == field
    assert info.value.line == line
    assert field in str(info.value)


def test_unknown_keys_are_rejected():
    with pytest.raises(ConfigError) as info:
        parse_config('{\n  "grid": {\n    "spacing": 0.1\n  }\n}')
    assert info.value.field == "grid.spacing"
    assert info.value.line == 3

    with pytest.raises(ConfigError) as info:
        parse_config('{"g": 3}')
    assert info.value.field == "g"


def test_syntax_and_duplicate_errors():
    with pytest.raises(ConfigError) as info:
        parse_config('{\n  "dt": 0.001,\n  oops\n}')
    assert info.value.line == 3

    with pytest.raises(ConfigError) as info:
        parse_config('{\n  "dt": 0.001,\n  "t_final": 1.0,\n  "dt": 0.002\n}')
    assert info.value.field == "dt"
    assert info.value.line == 4


def test_booleans_are_not_numbers():
    with pytest.raises(ConfigError) as info:
        parse_config('{"gradient": true}')
    assert info.value.field == "gradient"


def test_config_manager_overrides_and_saves(tmp_path, write_config):
    path = write_config({"grid": {"z_min": -12, "z_max": 12, "n_points": 2048}})
    manager = ConfigManager(path)

    config = manager.apply_overrides(method="implicit", dt=1e-3, seed=5, out_dir=tmp_path / "out", gradient=None)
    assert config.method == "implicit"
    assert config.dt == 1e-3
    assert config.gradient == 3.0
    assert config.experiment.seed == 5
    assert config.output.dir == str(tmp_path / "out")
    assert config.grid.n_points == 2048

    saved = tmp_path / "saved.json"
    assert manager.save_config(saved)
    assert ConfigManager(saved).config == config
    assert json.loads(saved.read_text())["method"] == "implicit"


def test_config_manager_rejects_invalid_override(write_config):
    manager = ConfigManager(write_config({}))
    with pytest.raises(ConfigError) as info:
        manager.apply_overrides(dt=-1.0)
    assert info.value.field == "dt"


def test_config_manager_missing_explicit_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ConfigManager(tmp_path / "absent.json")


def test_to_dict_round_trips():
    config = parse_config('{"experiment": {"centers": [-1, 0, 1]}, "converge": {"implicit": {"n_points": [512, 1024], "dts": [0.5]}}}')
    assert parse_config(json.dumps(to_dict(config))) == config


def test_system_checker_reports_versions():
    versions = SystemChecker().get_versions()

    assert set(versions) >= {"python", "twist", "numpy", "scipy", "numba"}
    ok, key, _ = SystemChecker().check_dependencies()
    assert ok and key == "setup.dependencies_ok"


def test_translation_catalogs():
    italian = TranslationManager(language="it")

    assert italian.get_current_language() == "it"
    assert italian.translate("config.errors.unknown_key") == "chiave sconosciuta"
    assert italian.translate("run.finished", command="simulate", count=3) == "simulate completato, 3 file scritti"
    assert italian.translate("no.such.key") == "no.such.key"
    assert set(italian.get_available_languages()) == {"en", "it"}
    assert not italian.set_language("xx")
    assert italian.get_current_language() == "it"


def test_converge_ladders_default_to_their_own_domains():
    converge = parse_config("").converge

    assert converge.ladder("spectral") == LadderSpec(z_max=16.0, n_points=(2048,), dts=(4e-3, 2e-3, 1e-3))
    assert converge.ladder("implicit") == LadderSpec(z_max=12.0, n_points=(8192,), dts=(0.1, 0.05, 0.025))

    partial = parse_config('{"converge": {"implicit": {"dts": [0.2, 0.1]}}}').converge
    assert partial.implicit == LadderSpec(z_max=12.0, n_points=(8192,), dts=(0.2, 0.1))
    assert partial.spectral == converge.spectral


def test_epsilon_upper_bound_is_inclusive():
    assert parse_config('{"epsilon": 1}').epsilon == 1.0
