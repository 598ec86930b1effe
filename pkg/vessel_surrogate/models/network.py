"""
Tipos da rede neural - VesselSurrogate
Arquitetura (6 camadas ocultas + saída linear), parâmetros, estado do Adam,
configuração e histórico de treino.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import DomainError

HIDDEN_LAYERS = 6


class Architecture(BaseModel):
    model_config = ConfigDict(frozen=True)

    input_dim: int = Field(default=4, ge=1)
    hidden_widths: tuple[int, ...] = (64,) * HIDDEN_LAYERS
    dropout_rate: float = Field(default=0.2, ge=0.0, lt=1.0)
    # índices 1-based das camadas ocultas seguidas de dropout
    dropout_after: tuple[int, ...] = (2, 4)
    # resíduos identidade (origem -> destino), 1-based
    skip_spans: tuple[tuple[int, int], ...] = ((1, 3), (3, 5))

    @model_validator(mode="after")
    def _consistent(self) -> "Architecture":
        if len(self.hidden_widths) != HIDDEN_LAYERS:
            raise ValueError(f"são necessárias exatamente {HIDDEN_LAYERS} camadas ocultas")
        if any(width < 1 for width in self.hidden_widths):
            raise ValueError("larguras das camadas ocultas devem ser positivas")
        for layer in self.dropout_after:
            if not 1 <= layer <= HIDDEN_LAYERS:
                raise ValueError(f"dropout_after fora de 1..{HIDDEN_LAYERS}: {layer}")
        for source, target in self.skip_spans:
            if not 1 <= source < target <= HIDDEN_LAYERS:
                raise ValueError(f"skip span inválido: ({source}, {target})")
            if self.hidden_widths[source - 1] != self.hidden_widths[target - 1]:
                raise ValueError(
                    f"skip span ({source}, {target}) liga camadas de larguras diferentes"
                )
        return self

    def layer_shapes(self) -> list[tuple[int, int]]:
        """(fan_out, fan_in) de cada camada linear, saída incluída."""
        widths = [self.input_dim, *self.hidden_widths, 1]
        return [(widths[i + 1], widths[i]) for i in range(len(widths) - 1)]

    def skips_into(self, layer: int) -> list[int]:
        return [source for source, target in self.skip_spans if target == layer]


@dataclass(frozen=True, eq=False)
class NetworkParameters:
    """θ: matrizes de peso (fan_out, fan_in) e vetores de bias por camada."""

    architecture: Architecture
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        shapes = self.architecture.layer_shapes()
        weights = tuple(np.asarray(w, dtype=np.float64) for w in self.weights)
        biases = tuple(np.asarray(b, dtype=np.float64).reshape(-1) for b in self.biases)
        if len(weights) != len(shapes) or len(biases) != len(shapes):
            raise DomainError(f"esperadas {len(shapes)} camadas, recebidas {len(weights)}")
        for index, ((fan_out, fan_in), w, b) in enumerate(zip(shapes, weights, biases)):
            if w.shape != (fan_out, fan_in) or b.shape != (fan_out,):
                raise DomainError(
                    f"camada {index}: forma {w.shape}/{b.shape}, esperado {(fan_out, fan_in)}/{(fan_out,)}"
                )
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise DomainError(f"camada {index}: parâmetros não finitos")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)

    def size(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))


@dataclass(frozen=True, eq=False)
class Gradients:
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class AdamState:
    first_moments: tuple[np.ndarray, ...]
    second_moments: tuple[np.ndarray, ...]
    step: int = 0
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros_like(cls, params: NetworkParameters, **hyper) -> "AdamState":
        # ordem: pesos de todas as camadas e depois os biases
        arrays = (*params.weights, *params.biases)
        return cls(
            first_moments=tuple(np.zeros_like(a) for a in arrays),
            second_moments=tuple(np.zeros_like(a) for a in arrays),
            **hyper,
        )


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_epochs: int = Field(default=2000, ge=1)
    batch_size: int = Field(default=128, ge=1)
    patience: int = Field(default=50, ge=1)
    seed: int = Field(default=0, ge=0)
    learning_rate: float = Field(default=0.001, gt=0)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    best_epoch: int = -1
    stopped_early: bool = False

    @property
    def epochs(self) -> int:
        return len(self.val_loss)

    @property
    def best_val_loss(self) -> float:
        return self.val_loss[self.best_epoch] if self.best_epoch >= 0 else float("inf")

    def best_so_far(self) -> list[float]:
        return np.minimum.accumulate(self.val_loss).tolist() if self.val_loss else []
