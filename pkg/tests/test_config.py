import pytest

from vessel_surrogate.core.config import load_run_config
from vessel_surrogate.core.errors import ConfigError
from vessel_surrogate.models.design import SamplingMethod


@pytest.fixture(autouse=True)
def _isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ("VESSEL_SEED", "VESSEL_N_SAMPLES", "VESSEL_JOBS"):
        monkeypatch.delenv(name, raising=False)


def _toml(tmp_path, text: str):
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults_describe_the_reference_run():
    config = load_run_config()
    assert (config.n_samples, config.n_train, config.ensemble_k) == (11311, 8000, 5)
    assert config.architecture().hidden_widths == (64,) * 6
    assert config.design_space().thickness.upper == 0.06
    assert config.material().yield_strength == 2.76e8
    assert SamplingMethod(config.sampling_method) is SamplingMethod.UNIFORM


def test_toml_overrides_defaults(tmp_path):
    config = load_run_config(_toml(tmp_path, "seed = 9\nhidden_widths = [8, 8, 8, 8, 8, 8]\n"))
    assert config.seed == 9
    assert config.architecture().hidden_widths == (8,) * 6
    assert config.train_config().seed == 9


def test_flags_beat_the_file(tmp_path):
    config = load_run_config(_toml(tmp_path, "seed = 9\njobs = 2\n"), seed=4, jobs=None)
    assert config.seed == 4
    assert config.jobs == 2


def test_file_beats_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("VESSEL_SEED", "5")
    assert load_run_config().seed == 5
    assert load_run_config(_toml(tmp_path, "seed = 9\n")).seed == 9


def test_dotenv_is_read(tmp_path):
    (tmp_path / ".env").write_text("VESSEL_N_SAMPLES=321\n", encoding="utf-8")
    assert load_run_config().n_samples == 321


def test_grids_expand_to_every_combination(tmp_path):
    config = load_run_config(
        _toml(tmp_path, "forest_max_depth = [4, 0]\nforest_max_features = [1, 2, 3]\nboost_shrinkage = [0.1, 0.5]\n")
    )
    assert len(config.forest_grid()) == 6
    assert {hp.max_depth for hp in config.forest_grid()} == {4, None}
    assert len(config.boost_grid()) == 4


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="não encontrado"):
        load_run_config(tmp_path / "nope.toml")


@pytest.mark.parametrize(
    "text, field",
    [
        ("n_samples = 0\n", "n_samples"),
        ("skip_spans = [[1, 7]]\n", "skip span"),
        ("depth_min = 10.0\ndepth_max = 5.0\n", "limite inferior"),
        ("sampling_method = \"sobol\"\n", "sobol"),
        ("learning_rates = 0.1\n", "learning_rates"),
    ],
)
def test_invalid_values_are_config_errors(tmp_path, text, field):
    with pytest.raises(ConfigError, match=field):
        load_run_config(_toml(tmp_path, text))


def test_safety_factor_below_one(tmp_path):
    with pytest.raises(ConfigError, match="safety_factor"):
        load_run_config(safety_factor=0.8)


def test_malformed_toml_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError, match="ilegível"):
        load_run_config(_toml(tmp_path, "seed = = 3\n[unterminated\n"))
