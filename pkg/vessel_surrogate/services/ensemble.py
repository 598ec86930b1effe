"""
Serviços do Deep Ensemble - VesselSurrogate
Uma rede base por fold (validação cruzada k-fold), cada uma treinada no
complemento do seu fold com divisão 90/10 para parada antecipada; a
predição final é a média dos membros.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..core.errors import DomainError, ModelError, TrainingError
from ..core.seeds import derive_seed
from ..models.dataset import Dataset, FoldAssignment
from ..models.design import DesignPoint
from ..models.ensemble import EnsembleMetadata, EnsembleModel, SplitRecord
from ..models.network import Architecture, NetworkParameters, TrainConfig, TrainHistory
from . import neural_net
from .dataset import fit_scaler, kfold

logger = logging.getLogger(__name__)

MIN_SAMPLES_PER_MEMBER = 10


@dataclass(frozen=True, eq=False)
class _MemberTask:
    index: int
    architecture: Architecture
    fit_data: Dataset
    val_data: Dataset
    config: TrainConfig


def _train_member(task: _MemberTask) -> tuple[NetworkParameters, TrainHistory]:
    logger.info(
        "membro %d: %d amostras de ajuste, %d de validação",
        task.index,
        len(task.fit_data),
        len(task.val_data),
    )
    try:
        return neural_net.train(task.architecture, task.fit_data, task.val_data, task.config)
    except TrainingError as exc:
        raise TrainingError(f"membro {task.index}: {exc}", epoch=exc.epoch, member=task.index) from exc


def _fold_assignment(n: int, k: int, master_seed: int) -> FoldAssignment:
    if k == 1:
        return FoldAssignment(k=1, membership=np.zeros(n, dtype=np.int64))
    return kfold(n, k, derive_seed(master_seed, "ensemble/folds"))


def train_ensemble(
    train_data: Dataset,
    k: int,
    arch: Architecture,
    config: TrainConfig,
    *,
    master_seed: int | None = None,
    val_fraction: float = 0.1,
    jobs: int = 1,
    split: SplitRecord | None = None,
) -> EnsembleModel:
    """
    Treina k membros; o membro i nunca vê amostras do fold i.

    O scaler é ajustado em todo o `train_data` e compartilhado. Sementes dos
    membros derivam da semente mestre (`config.seed` se não informada).
    """
    master = config.seed if master_seed is None else master_seed
    if k < 1:
        raise DomainError(f"k deve ser >= 1, recebido {k}")
    if len(train_data) < MIN_SAMPLES_PER_MEMBER * k:
        raise DomainError(
            f"são necessárias pelo menos {MIN_SAMPLES_PER_MEMBER * k} amostras para k = {k}"
        )
    if not 0 < val_fraction < 1:
        raise DomainError(f"val_fraction fora de (0, 1): {val_fraction}")

    scaler = fit_scaler(train_data)
    normalized = scaler.transform(train_data)
    folds = _fold_assignment(len(train_data), k, master)

    tasks, seeds = [], []
    for index in range(k):
        pool = folds.complement_indices(index)
        n_val = max(1, int(round(val_fraction * pool.shape[0])))
        shuffled = np.random.default_rng(derive_seed(master, f"ensemble/member-{index}/split")).permutation(pool)
        member_seed = derive_seed(master, f"ensemble/member-{index}")
        seeds.append(member_seed)
        tasks.append(
            _MemberTask(
                index=index,
                architecture=arch,
                fit_data=normalized.subset(shuffled[:-n_val]),
                val_data=normalized.subset(shuffled[-n_val:]),
                config=config.model_copy(update={"seed": member_seed}),
            )
        )

    if jobs > 1 and k > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, k)) as pool_executor:
            results = list(pool_executor.map(_train_member, tasks))
    else:
        results = [_train_member(task) for task in tasks]

    members = tuple(params for params, _ in results)
    histories = tuple(history for _, history in results)
    return EnsembleModel(
        members=members,
        scaler=scaler,
        architecture=arch,
        metadata=EnsembleMetadata(
            master_seed=master,
            member_seeds=tuple(seeds),
            fold_membership=tuple(int(v) for v in folds.membership),
            histories=histories,
        ),
        split=split,
    )


# ===================== Predição ===================== #

def _as_matrix(inputs) -> np.ndarray:
    if isinstance(inputs, DesignPoint):
        return inputs.as_vector().reshape(1, -1)
    return np.asarray(inputs, dtype=np.float64).reshape(-1, 4)


def member_outputs(model: EnsembleModel, inputs) -> np.ndarray:
    """Saídas padronizadas (k, n) de cada membro em modo avaliação."""
    normalized = model.scaler.apply(_as_matrix(inputs))
    outputs = np.empty((model.k, normalized.shape[0]))
    for index, member in enumerate(model.members):
        outputs[index] = neural_net.predict_batch(member, normalized)
        if not np.all(np.isfinite(outputs[index])):
            raise ModelError(f"membro {index} produziu saída não finita")
    return outputs


def predict_batch(model: EnsembleModel, inputs) -> np.ndarray:
    """Média aritmética das saídas dos membros, desfeita a padronização → Pa."""
    return model.scaler.invert_target(member_outputs(model, inputs).mean(axis=0))


def predict(model: EnsembleModel, design: DesignPoint) -> float:
    return float(predict_batch(model, design)[0])


def member_predictions(model: EnsembleModel, inputs) -> np.ndarray:
    """Predição de cada membro em Pa, (k, n)."""
    return model.scaler.invert_target(member_outputs(model, inputs))


def predict_with_spread(model: EnsembleModel, inputs) -> tuple[np.ndarray, np.ndarray]:
    """Média do ensemble e desvio padrão populacional entre membros, ambos em Pa."""
    outputs = member_outputs(model, inputs)
    mean = model.scaler.invert_target(outputs.mean(axis=0))
    spread = outputs.std(axis=0) * model.scaler.target_std
    return mean, spread


def out_of_fold_predictions(model: EnsembleModel, train_data: Dataset) -> np.ndarray:
    """Cada amostra prevista pelo membro que nunca viu o seu fold."""
    membership = np.asarray(model.metadata.fold_membership, dtype=np.int64)
    if model.k < 2:
        raise DomainError("predição fora do fold exige k >= 2")
    if membership.shape[0] != len(train_data):
        raise DomainError(
            f"conjunto com {len(train_data)} amostras, ensemble treinado com {membership.shape[0]}"
        )
    normalized = model.scaler.apply(train_data.inputs)
    standardized = np.empty(len(train_data))
    for index, member in enumerate(model.members):
        rows = membership == index
        if np.any(rows):
            standardized[rows] = neural_net.predict_batch(member, normalized[rows])
    return model.scaler.invert_target(standardized)
