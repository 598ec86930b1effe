import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vessel_surrogate.core.errors import ConfigError, DomainError
from vessel_surrogate.models.dataset import Dataset
from vessel_surrogate.models.design import Bounds, DesignPoint, DesignSpace, SamplingMethod
from vessel_surrogate.services.dataset import (
    fit_scaler,
    generate_dataset,
    kfold,
    sample_designs,
    sample_matrix,
    split_indices,
    train_test_split,
)


def indexed_dataset(n: int) -> Dataset:
    inputs = np.arange(n * 4, dtype=np.float64).reshape(n, 4)
    return Dataset(inputs, np.arange(n, dtype=np.float64) + 1.0)


# ============= Amostragem ============= #

def test_degenerate_bounds_repeat_the_single_point():
    space = DesignSpace(
        depth=Bounds(lower=1000.0, upper=1000.0),
        length=Bounds(lower=1.0, upper=1.0),
        thickness=Bounds(lower=0.01, upper=0.01),
        radius=Bounds(lower=0.2, upper=0.2),
    )
    designs = sample_designs(space, 3, seed=4)
    assert designs == [DesignPoint(depth=1000.0, length=1.0, thickness=0.01, radius=0.2)] * 3


def test_uniform_samples_cover_the_space():
    space = DesignSpace()
    samples = sample_matrix(space, 10_000, seed=1)
    lower, upper = space.lower(), space.upper()
    assert samples.shape == (10_000, 4)
    assert np.all(samples >= lower) and np.all(samples <= upper)
    midpoint = (lower + upper) / 2
    assert np.all(np.abs(samples.mean(axis=0) - midpoint) <= 0.02 * (upper - lower))
    assert np.all(samples[:, 2] < samples[:, 3])


def test_latin_hypercube_fills_every_stratum_once():
    space = DesignSpace()
    n = 100
    samples = sample_matrix(space, n, seed=9, method=SamplingMethod.LATIN_HYPERCUBE)
    lower, upper = space.lower(), space.upper()
    strata = np.clip(np.floor((samples - lower) / (upper - lower) * n).astype(int), 0, n - 1)
    for column in range(4):
        assert sorted(strata[:, column]) == list(range(n))
    assert np.all(samples[:, 2] < samples[:, 3])


def test_latin_hypercube_repairs_invalid_geometry():
    space = DesignSpace(
        thickness=Bounds(lower=0.01, upper=0.2),
        radius=Bounds(lower=0.05, upper=0.3),
    )
    samples = sample_matrix(space, 200, seed=2, method="latin_hypercube")
    assert np.all(samples[:, 2] < samples[:, 3])


def test_sampling_is_deterministic():
    first = sample_matrix(DesignSpace(), 50, seed=17)
    second = sample_matrix(DesignSpace(), 50, seed=17)
    np.testing.assert_array_equal(first, second)


def test_non_positive_sample_count_is_a_config_error():
    with pytest.raises(ConfigError):
        sample_matrix(DesignSpace(), 0, seed=0)


def test_infeasible_bounds_are_a_config_error():
    space = DesignSpace(
        thickness=Bounds(lower=0.1, upper=0.2),
        radius=Bounds(lower=0.05, upper=0.101),
    )
    with pytest.raises(ConfigError):
        sample_matrix(space, 100, seed=0)


# ============= Geração ============= #

def test_generate_dataset_empty_and_single():
    assert len(generate_dataset([])) == 0
    single = generate_dataset([DesignPoint(depth=1000.0, length=1.0, thickness=0.01, radius=0.2)])
    assert len(single) == 1
    assert single.targets[0] == pytest.approx(1.786e8, rel=1e-3)


def test_generate_dataset_is_independent_of_jobs():
    designs = sample_matrix(DesignSpace(), 64, seed=5)
    serial = generate_dataset(designs, jobs=1)
    parallel = generate_dataset(designs, jobs=3)
    np.testing.assert_array_equal(serial.inputs, parallel.inputs)
    np.testing.assert_array_equal(serial.targets, parallel.targets)


def test_generate_dataset_names_the_bad_sample():
    designs = np.array([[1000.0, 1.0, 0.01, 0.2], [1000.0, 1.0, 0.3, 0.2]])
    with pytest.raises(DomainError, match="amostra 1"):
        generate_dataset(designs)


# ============= Partições ============= #

def test_train_test_split_reference_sizes():
    train, test = train_test_split(indexed_dataset(11_311), 8000, seed=0)
    assert (len(train), len(test)) == (8000, 3311)


def test_train_test_split_is_a_partition():
    data = indexed_dataset(300)
    train, test = train_test_split(data, 200, seed=3)
    union = np.sort(np.concatenate([train.targets, test.targets]))
    np.testing.assert_array_equal(union, np.sort(data.targets))
    _, single = train_test_split(data, 299, seed=3)
    assert len(single) == 1


def test_train_test_split_is_deterministic():
    a_train, _ = split_indices(500, 400, seed=8)
    b_train, _ = split_indices(500, 400, seed=8)
    np.testing.assert_array_equal(a_train, b_train)


@pytest.mark.parametrize("n_train", [0, 300, 301])
def test_train_size_out_of_range(n_train):
    with pytest.raises(DomainError):
        train_test_split(indexed_dataset(300), n_train, seed=0)


def test_kfold_example_sizes():
    assert kfold(8000, 5, seed=0).sizes() == [1600] * 5
    assert kfold(indexed_dataset(7), 3, seed=0).sizes() == [3, 2, 2]


def test_kfold_rejects_too_many_folds():
    with pytest.raises(DomainError):
        kfold(3, 4, seed=0)


@settings(max_examples=100)
@given(st.integers(min_value=2, max_value=300), st.integers(min_value=2, max_value=20), st.integers(0, 2**32))
def test_kfold_partition_property(n, k, seed):
    if k > n:
        return
    folds = kfold(n, k, seed)
    seen = np.concatenate([folds.fold_indices(i) for i in range(k)])
    assert sorted(seen.tolist()) == list(range(n))
    sizes = folds.sizes()
    assert max(sizes) - min(sizes) <= 1
    for i in range(k):
        assert set(folds.complement_indices(i)).isdisjoint(folds.fold_indices(i))


@settings(max_examples=100)
@given(st.integers(min_value=2, max_value=500), st.data())
def test_split_partition_property(n, data):
    n_train = data.draw(st.integers(min_value=1, max_value=n - 1))
    seed = data.draw(st.integers(0, 2**32))
    train_idx, test_idx = split_indices(n, n_train, seed)
    assert len(train_idx) == n_train
    assert sorted(np.concatenate([train_idx, test_idx]).tolist()) == list(range(n))


# ============= Normalização ============= #

def test_scaler_maps_training_bounds_to_unit_interval(oracle_data):
    data = oracle_data(50)
    scaler = fit_scaler(data)
    lower = data.inputs.min(axis=0)
    upper = data.inputs.max(axis=0)
    np.testing.assert_array_equal(scaler.apply(lower), np.zeros(4))
    np.testing.assert_array_equal(scaler.apply(upper), np.ones(4))
    normalized = scaler.apply(data.inputs)
    assert normalized.min() >= 0.0 and normalized.max() <= 1.0


def test_scaler_does_not_clamp_out_of_range_inputs(oracle_data):
    scaler = fit_scaler(oracle_data(50))
    outside = np.array(scaler.input_max) * 2.0
    assert np.all(scaler.apply(outside) > 1.0)


def test_scaler_target_round_trip(oracle_data):
    scaler = fit_scaler(oracle_data(50))
    targets = np.random.default_rng(0).uniform(1e6, 5e8, 1000)
    restored = scaler.invert_target(scaler.apply_target(targets))
    assert np.max(np.abs(restored - targets) / targets) < 1e-12


def test_constant_input_variable_is_named():
    inputs = np.column_stack([np.linspace(100, 200, 5), np.full(5, 1.0), np.linspace(0.01, 0.02, 5), np.linspace(0.1, 0.2, 5)])
    with pytest.raises(ConfigError, match="length"):
        fit_scaler(Dataset(inputs, np.linspace(1.0, 2.0, 5)))
