import logging

import numpy as np
import pytest

from vessel_surrogate.models.network import Architecture, TrainConfig
from vessel_surrogate.services.dataset import generate_dataset, sample_matrix
from vessel_surrogate.models.design import DesignSpace


@pytest.fixture(autouse=True)
def _detach_cli_handlers():
    yield
    logger = logging.getLogger("vessel_surrogate")
    for handler in list(logger.handlers):
        if getattr(handler, "_vessel_surrogate", False):
            logger.removeHandler(handler)


@pytest.fixture
def tiny_arch() -> Architecture:
    return Architecture(hidden_widths=(4,) * 6)


@pytest.fixture
def quick_config() -> TrainConfig:
    return TrainConfig(max_epochs=3, batch_size=16, patience=2, seed=11)


@pytest.fixture
def oracle_data():
    """Dataset pequeno gerado pelo oráculo (semente fixa)."""

    def build(n: int = 120, seed: int = 3):
        return generate_dataset(sample_matrix(DesignSpace(), n, seed))

    return build


def random_designs(n: int, seed: int) -> np.ndarray:
    return sample_matrix(DesignSpace(), n, seed)
