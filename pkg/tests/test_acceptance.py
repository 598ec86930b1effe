"""Execução completa em escala de referência; roda com `pytest -m slow`."""

from pathlib import Path

import pytest

from vessel_surrogate.core.config import load_run_config
from vessel_surrogate.core.seeds import derive_seed
from vessel_surrogate.services import dataset as dataset_service
from vessel_surrogate.services import ensemble, metrics

pytestmark = pytest.mark.slow

REFERENCE_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "reference_scale.toml"


def test_reference_scale_ensemble_on_oracle_data():
    config = load_run_config(REFERENCE_CONFIG)
    designs = dataset_service.sample_matrix(
        config.design_space(), config.n_samples, derive_seed(config.seed, "sampling"), config.sampling_method
    )
    data = dataset_service.generate_dataset(designs, jobs=config.jobs)
    train, test = dataset_service.train_test_split(data, config.n_train, derive_seed(config.seed, "split"))
    assert (len(train), len(test)) == (8000, 3311)

    model = ensemble.train_ensemble(
        train,
        config.ensemble_k,
        config.architecture(),
        config.train_config(),
        val_fraction=config.val_fraction,
        jobs=config.jobs,
    )
    result = metrics.report(test.targets, ensemble.predict_batch(model, test.inputs))
    assert result.accuracy >= 88.0
    assert result.mean_abs_residual <= 0.06
