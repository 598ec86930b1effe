"""
Serviços de Dataset - VesselSurrogate
Amostragem do espaço de projeto, geração via oráculo, partições
treino/teste e k-fold, e ajuste do Scaler.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from sklearn.model_selection import KFold
from sklearn.model_selection import train_test_split as _sk_train_test_split

from ..core.errors import ConfigError, DomainError
from ..models.dataset import Dataset, FoldAssignment, Provenance, Scaler
from ..models.design import DESIGN_VARIABLES, DesignPoint, DesignSpace, SamplingMethod
from . import physics_oracle

logger = logging.getLogger(__name__)

# Abaixo desta taxa de aceitação os limites são considerados inviáveis
MIN_ACCEPTANCE_RATE = 0.01
_THICKNESS, _RADIUS = 2, 3


# ===================== Amostragem ===================== #

def sample_designs(
    space: DesignSpace,
    n: int,
    seed: int,
    method: SamplingMethod | str = SamplingMethod.UNIFORM,
) -> list[DesignPoint]:
    """Amostra n projetos válidos dentro dos limites; determinístico pela semente."""
    return [DesignPoint.from_vector(row) for row in sample_matrix(space, n, seed, method)]


def sample_matrix(
    space: DesignSpace,
    n: int,
    seed: int,
    method: SamplingMethod | str = SamplingMethod.UNIFORM,
) -> np.ndarray:
    """Mesma amostragem de `sample_designs`, devolvendo a matriz (n, 4)."""
    if n <= 0:
        raise ConfigError(f"n deve ser positivo, recebido {n}")
    method = SamplingMethod(method)
    rng = np.random.default_rng(seed)
    if method is SamplingMethod.UNIFORM:
        return _sample_uniform(space, n, rng)
    return _sample_latin_hypercube(space, n, rng)


def _sample_uniform(space: DesignSpace, n: int, rng: np.random.Generator) -> np.ndarray:
    lower, upper = space.lower(), space.upper()
    accepted: list[np.ndarray] = []
    n_accepted = 0
    n_drawn = 0
    while n_accepted < n:
        batch = max(n - n_accepted, 64)
        draws = rng.uniform(lower, upper, size=(batch, len(DESIGN_VARIABLES)))
        valid = draws[draws[:, _THICKNESS] < draws[:, _RADIUS]]
        n_drawn += batch
        accepted.append(valid)
        n_accepted += valid.shape[0]
        if n_drawn >= 10_000 and n_accepted / n_drawn < MIN_ACCEPTANCE_RATE:
            raise ConfigError(
                f"espaço de projeto inviável: {n_accepted}/{n_drawn} amostras com thickness < radius"
            )
    return np.concatenate(accepted)[:n]


def _sample_latin_hypercube(space: DesignSpace, n: int, rng: np.random.Generator) -> np.ndarray:
    lower, upper = space.lower(), space.upper()
    d = len(DESIGN_VARIABLES)
    strata = np.column_stack([rng.permutation(n) for _ in range(d)])
    unit = (strata + rng.random((n, d))) / n
    samples = lower + unit * (upper - lower)
    _repair_geometry(samples, rng)
    return samples


def _repair_geometry(samples: np.ndarray, rng: np.random.Generator) -> None:
    """
    Corrige linhas com t >= R trocando espessuras entre linhas.

    A troca só permuta valores dentro da coluna, então cada variável
    continua ocupando todos os estratos exatamente uma vez.
    """
    thickness = samples[:, _THICKNESS]
    radius = samples[:, _RADIUS]
    for row in np.flatnonzero(thickness >= radius):
        if thickness[row] < radius[row]:
            continue  # já corrigida por uma troca anterior
        for other in rng.permutation(samples.shape[0]):
            if thickness[other] < radius[row] and thickness[row] < radius[other]:
                thickness[row], thickness[other] = thickness[other], thickness[row]
                break
        else:
            raise ConfigError(
                "hipercubo latino sem geometria viável: limites de thickness e radius incompatíveis"
            )


# ===================== Geração via oráculo ===================== #

def _validate_designs(designs: list[DesignPoint] | np.ndarray) -> np.ndarray:
    if isinstance(designs, np.ndarray):
        matrix = np.asarray(designs, dtype=np.float64).reshape(-1, len(DESIGN_VARIABLES))
    else:
        matrix = np.array([d.as_vector() for d in designs]).reshape(-1, len(DESIGN_VARIABLES))
    bad = (
        ~np.all(np.isfinite(matrix), axis=1)
        | (matrix[:, 0] < 0)
        | (matrix[:, 1] < 0)
        | (matrix[:, _THICKNESS] <= 0)
        | (matrix[:, _THICKNESS] >= matrix[:, _RADIUS])
    )
    if np.any(bad):
        index = int(np.flatnonzero(bad)[0])
        raise DomainError(f"amostra {index} inválida para o oráculo: {matrix[index].tolist()}")
    return matrix


def _evaluate_chunk(chunk: np.ndarray, density: float, gravity: float) -> np.ndarray:
    return physics_oracle.max_vm_stress_batch(chunk, density=density, gravity=gravity)


def generate_dataset(
    designs: list[DesignPoint] | np.ndarray,
    *,
    jobs: int = 1,
    density: float = physics_oracle.SEAWATER_DENSITY,
    gravity: float = physics_oracle.GRAVITY,
) -> Dataset:
    """Avalia o oráculo em cada projeto; a ordem do resultado segue a das amostras."""
    matrix = _validate_designs(designs)
    if matrix.shape[0] == 0:
        return Dataset.empty(Provenance.ORACLE)
    if jobs <= 1:
        targets = _evaluate_chunk(matrix, density, gravity)
    else:
        chunks = np.array_split(matrix, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_evaluate_chunk, chunks, [density] * jobs, [gravity] * jobs))
        targets = np.concatenate(parts)
    logger.debug("oráculo avaliado em %d amostras (jobs=%d)", matrix.shape[0], jobs)
    return Dataset(matrix, targets, Provenance.ORACLE)


# ===================== Partições ===================== #

def _random_state(seed: int) -> int:
    return int(seed) % 2**32


def split_indices(n: int, n_train: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    if not 0 < n_train < n:
        raise DomainError(f"n_train deve estar em (0, {n}), recebido {n_train}")
    train_idx, test_idx = _sk_train_test_split(
        np.arange(n), train_size=n_train, random_state=_random_state(seed)
    )
    return train_idx, test_idx


def train_test_split(data: Dataset, n_train: int, seed: int) -> tuple[Dataset, Dataset]:
    """Partição aleatória disjunta com |treino| = n_train."""
    train_idx, test_idx = split_indices(len(data), n_train, seed)
    return data.subset(train_idx), data.subset(test_idx)


def kfold(data: Dataset | int, k: int, seed: int) -> FoldAssignment:
    """Atribui cada amostra a um de k folds balanceados (tamanhos diferem no máximo 1)."""
    n = data if isinstance(data, int) else len(data)
    if k < 2:
        raise DomainError(f"k deve ser >= 2, recebido {k}")
    if k > n:
        raise DomainError(f"k = {k} maior que o número de amostras ({n})")
    membership = np.empty(n, dtype=np.int64)
    splitter = KFold(n_splits=k, shuffle=True, random_state=_random_state(seed))
    for fold, (_, held_out) in enumerate(splitter.split(np.arange(n))):
        membership[held_out] = fold
    return FoldAssignment(k=k, membership=membership)


# ===================== Normalização ===================== #

def fit_scaler(train: Dataset) -> Scaler:
    """Ajusta min-max das entradas e z-score do alvo somente no conjunto de treino."""
    if len(train) == 0:
        raise DomainError("não é possível ajustar o scaler em um conjunto vazio")
    lower = train.inputs.min(axis=0)
    upper = train.inputs.max(axis=0)
    for name, lo, hi in zip(DESIGN_VARIABLES, lower, upper):
        if not hi > lo:
            raise ConfigError(f"variável de entrada '{name}' é constante no treino ({lo})")
    std = float(np.std(train.targets))
    if not std > 0:
        raise ConfigError("alvo constante no treino: desvio padrão nulo")
    return Scaler(
        input_min=tuple(float(v) for v in lower),
        input_max=tuple(float(v) for v in upper),
        target_mean=float(np.mean(train.targets)),
        target_std=std,
    )
