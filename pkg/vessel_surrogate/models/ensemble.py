"""Ensemble de k redes treinadas em validação cruzada, com scaler compartilhado."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core.errors import DomainError
from .dataset import Scaler
from .network import Architecture, NetworkParameters, TrainHistory


@dataclass(frozen=True)
class SplitRecord:
    """Partição treino/teste usada no treino, guardada para o `eval`."""

    seed: int
    n_data: int
    n_train: int
    test_indices: tuple[int, ...]


@dataclass(frozen=True)
class EnsembleMetadata:
    master_seed: int
    member_seeds: tuple[int, ...]
    fold_membership: tuple[int, ...] = ()
    histories: tuple[TrainHistory, ...] = field(default=(), compare=False)


@dataclass(frozen=True, eq=False)
class EnsembleModel:
    members: tuple[NetworkParameters, ...]
    scaler: Scaler
    architecture: Architecture
    metadata: EnsembleMetadata
    split: SplitRecord | None = None

    def __post_init__(self) -> None:
        if not self.members:
            raise DomainError("ensemble precisa de pelo menos um membro")
        for index, member in enumerate(self.members):
            if member.architecture != self.architecture:
                raise DomainError(f"membro {index} com arquitetura diferente do ensemble")

    @property
    def k(self) -> int:
        return len(self.members)
