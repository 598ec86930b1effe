import json

import pandas as pd
import pytest

from vessel_surrogate.cli import main
from vessel_surrogate.controllers.surrogate_controller import SurrogateController
from vessel_surrogate.core.config import load_run_config
from vessel_surrogate.repositories.dataset_repository import PREDICTION_COLUMNS, DatasetRepository
from vessel_surrogate.repositories.model_repository import ModelRepository

TINY_RUN = """
seed = 3
n_samples = 150
n_train = 110
hidden_widths = [4, 4, 4, 4, 4, 4]
max_epochs = 3
patience = 2
batch_size = 32
ensemble_k = 2
forest_max_depth = [3]
forest_n_trees = [3]
forest_max_features = [2]
boost_max_depth = [2]
boost_n_trees = [3]
grid_folds = 2
"""


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = tmp_path / "tiny.toml"
    config.write_text(
        TINY_RUN + f'data_path = "{(tmp_path / "data.csv").as_posix()}"\n'
        f'model_path = "{(tmp_path / "model.json").as_posix()}"\n',
        encoding="utf-8",
    )
    return tmp_path, ["--config", str(config), "--log-level", "WARNING"]


@pytest.fixture
def trained_workspace(workspace):
    root, common = workspace
    assert main(["gen-data", *common]) == 0
    assert main(["train", *common]) == 0
    return root, common


# ============= gen-data ============= #

def test_gen_data_writes_the_configured_rows(workspace):
    root, common = workspace
    assert main(["gen-data", *common]) == 0
    assert len(DatasetRepository.read_csv(root / "data.csv")) == 150


def test_gen_data_is_reproducible(workspace):
    root, common = workspace
    assert main(["gen-data", *common, "--out", str(root / "a.csv")]) == 0
    assert main(["gen-data", *common, "--out", str(root / "b.csv")]) == 0
    assert (root / "a.csv").read_bytes() == (root / "b.csv").read_bytes()


def test_latin_hypercube_flag(workspace):
    root, common = workspace
    assert main(["gen-data", *common, "--method", "latin_hypercube", "--n-samples", "40"]) == 0
    assert len(DatasetRepository.read_csv(root / "data.csv")) == 40


def test_invalid_sample_count_fails_before_writing(workspace, capsys):
    root, common = workspace
    assert main(["gen-data", *common, "--n-samples", "0"]) == 1
    assert "n_samples" in capsys.readouterr().err
    assert not (root / "data.csv").exists()


def test_unknown_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["fly"])
    assert info.value.code == 2


# ============= train / eval ============= #

def test_train_reports_the_parameter_count(workspace, capsys):
    _, common = workspace
    assert main(["gen-data", *common]) == 0
    capsys.readouterr()
    assert main(["train", *common]) == 0
    assert "param_count: 125" in capsys.readouterr().out


def test_training_is_byte_reproducible(trained_workspace):
    root, common = trained_workspace
    assert main(["train", *common, "--out", str(root / "again.json")]) == 0
    assert main(["train", *common, "--jobs", "2", "--out", str(root / "parallel.json")]) == 0
    original = (root / "model.json").read_bytes()
    assert (root / "again.json").read_bytes() == original
    assert (root / "parallel.json").read_bytes() == original


def test_train_without_data_fails(workspace, capsys):
    _, common = workspace
    assert main(["train", *common]) == 1
    assert "erro" in capsys.readouterr().err


def test_eval_prints_the_table(trained_workspace, capsys):
    root, common = trained_workspace
    capsys.readouterr()
    assert main(["eval", *common, "--out", str(root / "eval.csv")]) == 0
    out = capsys.readouterr().out
    assert "Deep ensemble" in out
    assert "(test)" in out
    assert (root / "eval.csv").read_text(encoding="utf-8").startswith("model,accuracy")


# ============= benchmark ============= #

def test_benchmark_table_and_models(workspace, capsys):
    root, common = workspace
    assert main(["gen-data", *common]) == 0
    capsys.readouterr()
    args = ["benchmark", *common, "--out", str(root / "bench.csv"), "--out-models", str(root / "models")]
    assert main(args) == 0
    out = capsys.readouterr().out
    for name in ("Deep ensemble", "Random Forest", "Gradient Boost"):
        assert name in out
    assert len(pd.read_csv(root / "bench.csv")) == 3
    ModelRepository.load_ensemble(root / "models" / "ensemble.json")
    forest, forest_scaler = ModelRepository.load_tree_model(root / "models" / "random_forest.json")
    boost, _ = ModelRepository.load_tree_model(root / "models" / "gradient_boost.json")
    assert forest_scaler is not None
    assert len(forest.trees) == 3 and len(boost.trees) == 3


def test_benchmark_training_size_sweep(workspace):
    root, common = workspace
    assert main(["gen-data", *common]) == 0
    assert main(["benchmark", *common, "--train-sizes", "60", "--out", str(root / "sweep.csv")]) == 0
    table = pd.read_csv(root / "sweep.csv")
    assert len(table) == 6
    assert "Random Forest (n=60)" in table["model"].tolist()


def test_benchmark_rejects_oversized_sweep(workspace, capsys):
    _, common = workspace
    assert main(["gen-data", *common]) == 0
    assert main(["benchmark", *common, "--train-sizes", "500"]) == 1
    assert "500" in capsys.readouterr().err


# ============= predict ============= #

def test_predict_single_design_at_the_surface(trained_workspace, capsys):
    _, common = trained_workspace
    capsys.readouterr()
    args = ["predict", *common, "--depth", "0", "--length", "1", "--thickness", "0.01", "--radius", "0.2"]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert "oráculo 0.000 MPa" in out
    assert "íntegro" in out
    assert "±" in out


def test_predict_batch_csv(trained_workspace, capsys):
    root, common = trained_workspace
    designs = root / "designs.csv"
    designs.write_text(
        "depth_m,length_m,thickness_m,radius_m\n1000,1,0.01,0.2\n5000,1,0.003,0.4\n", encoding="utf-8"
    )
    assert main(["predict", *common, "--designs", str(designs), "--out", str(root / "pred.csv")]) == 0
    frame = pd.read_csv(root / "pred.csv")
    assert list(frame.columns) == list(PREDICTION_COLUMNS)
    assert frame["feasible"].tolist() == [True, False]
    assert (frame["spread_mpa"] >= 0).all()
    capsys.readouterr()
    assert main(["predict", *common, "--designs", str(designs)]) == 0
    printed = capsys.readouterr().out
    records = json.loads(printed[: printed.rindex("]") + 1])
    assert records[0]["oracle_mpa"] == pytest.approx(178.6, rel=1e-3)


def test_predict_invalid_design(trained_workspace, capsys):
    _, common = trained_workspace
    capsys.readouterr()
    args = ["predict", *common, "--depth", "100", "--length", "1", "--thickness", "0.3", "--radius", "0.2"]
    assert main(args) == 1
    assert "thickness" in capsys.readouterr().err


def test_predict_partial_design_flags(trained_workspace, capsys):
    _, common = trained_workspace
    assert main(["predict", *common, "--depth", "100"]) == 1
    assert "--radius" in capsys.readouterr().err


def test_malformed_config_file_is_reported(tmp_path, capsys):
    broken = tmp_path / "broken.toml"
    broken.write_text("seed = = 3\n", encoding="utf-8")
    assert main(["gen-data", "--config", str(broken)]) == 1
    assert "erro de configuração" in capsys.readouterr().err


def test_predict_flags_designs_outside_the_sampled_space(trained_workspace):
    root, _ = trained_workspace
    config = load_run_config(root / "tiny.toml")
    model_path = str(root / "model.json")
    inside = {"depth": 1000.0, "length": 1.0, "thickness": 0.01, "radius": 0.2}
    outside = {**inside, "depth": 0.0}
    result = SurrogateController.predict(config, model_path, design=inside)
    assert result["success"] and result["data"]["in_design_space"]
    assert result["data"]["spread_mpa"] >= 0
    assert not SurrogateController.predict(config, model_path, design=outside)["data"]["in_design_space"]
