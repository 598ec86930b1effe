"""
Tipos de dados do conjunto de treino - VesselSurrogate
Dataset, Scaler (normalização) e FoldAssignment (k-fold).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import DomainError
from .design import DESIGN_VARIABLES, DesignPoint


class Provenance(str, Enum):
    ORACLE = "oracle-generated"
    IMPORTED = "imported"
    NORMALIZED = "normalized"


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Pares (X, Y*): matriz de projetos (n, 4) na ordem de DESIGN_VARIABLES
    e tensões máximas de von Mises em Pa.
    """

    inputs: np.ndarray
    targets: np.ndarray
    provenance: Provenance = Provenance.ORACLE

    def __post_init__(self) -> None:
        inputs = np.asarray(self.inputs, dtype=np.float64)
        targets = np.asarray(self.targets, dtype=np.float64).reshape(-1)
        if inputs.ndim != 2:
            raise DomainError(f"inputs deve ser uma matriz (n, d), recebido shape {inputs.shape}")
        if inputs.shape[0] != targets.shape[0]:
            raise DomainError(
                f"|inputs| = {inputs.shape[0]} diferente de |targets| = {targets.shape[0]}"
            )
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    def __len__(self) -> int:
        return int(self.targets.shape[0])

    @property
    def designs(self) -> list[DesignPoint]:
        return [DesignPoint.from_vector(row) for row in self.inputs]

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.inputs[indices], self.targets[indices], self.provenance)

    @classmethod
    def empty(cls, provenance: Provenance = Provenance.ORACLE) -> "Dataset":
        return cls(np.empty((0, len(DESIGN_VARIABLES))), np.empty(0), provenance)


class Scaler(BaseModel):
    """Min-max por variável de entrada e z-score do alvo, ajustados só no treino."""

    model_config = ConfigDict(frozen=True)

    input_min: tuple[float, ...]
    input_max: tuple[float, ...]
    target_mean: float = Field(allow_inf_nan=False)
    target_std: float = Field(gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _non_degenerate(self) -> "Scaler":
        if len(self.input_min) != len(self.input_max):
            raise ValueError("input_min e input_max com tamanhos diferentes")
        for name, lo, hi in zip(DESIGN_VARIABLES, self.input_min, self.input_max):
            if not hi > lo:
                raise ValueError(f"variável '{name}' constante no treino (max = min)")
        return self

    def apply(self, inputs) -> np.ndarray:
        """Escala para [0, 1] com os limites do treino; sem saturação fora deles."""
        lo = np.asarray(self.input_min)
        hi = np.asarray(self.input_max)
        return (np.asarray(inputs, dtype=np.float64) - lo) / (hi - lo)

    def apply_target(self, targets) -> np.ndarray:
        return (np.asarray(targets, dtype=np.float64) - self.target_mean) / self.target_std

    def invert_target(self, standardized) -> np.ndarray:
        return np.asarray(standardized, dtype=np.float64) * self.target_std + self.target_mean

    def transform(self, data: Dataset) -> Dataset:
        return Dataset(self.apply(data.inputs), self.apply_target(data.targets), Provenance.NORMALIZED)


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    k: int
    membership: np.ndarray = field(repr=False)

    def fold_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.membership == fold)

    def complement_indices(self, fold: int) -> np.ndarray:
        if self.k == 1:
            return np.arange(self.membership.shape[0])
        return np.flatnonzero(self.membership != fold)

    def sizes(self) -> list[int]:
        return np.bincount(self.membership, minlength=self.k).tolist()
