"""
Tipos dos modelos de árvore - VesselSurrogate
Nó CART, floresta aleatória, gradient boosting e hiperparâmetros.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import DomainError


class SplitCriterion(str, Enum):
    VARIANCE_REDUCTION = "variance_reduction"
    MAE_REDUCTION = "mae_reduction"


class TreeFamily(str, Enum):
    RANDOM_FOREST = "random_forest"
    GRADIENT_BOOST = "gradient_boost"


@dataclass(frozen=True)
class TreeNode:
    """Nó interno (feature, threshold, left, right) ou folha (value)."""

    value: float | None = None
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    def __post_init__(self) -> None:
        if self.is_leaf:
            if self.value is None:
                raise DomainError("folha sem valor")
        elif self.left is None or self.right is None or self.threshold is None:
            raise DomainError("nó interno precisa de threshold e dois filhos")

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def leaf_count(self) -> int:
        if self.is_leaf:
            return 1
        return self.left.leaf_count() + self.right.leaf_count()

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


class TreeHyperParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_depth: int | None = Field(default=None, ge=1)  # None = sem limite
    min_samples_leaf: int = Field(default=1, ge=1)
    criterion: SplitCriterion = SplitCriterion.VARIANCE_REDUCTION
    n_trees: int = Field(default=100, ge=1)
    max_features: int | None = Field(default=None, ge=1)  # None = todas
    bootstrap: bool = True
    shrinkage: float = Field(default=0.1, gt=0, le=1)

    def size_key(self) -> tuple[int, float]:
        """Chave de desempate: menos árvores, depois menor profundidade."""
        return (self.n_trees, float("inf") if self.max_depth is None else float(self.max_depth))


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[TreeNode, ...]
    seeds: tuple[int, ...]
    hyperparams: TreeHyperParams

    def __post_init__(self) -> None:
        if not self.trees:
            raise DomainError("floresta precisa de pelo menos uma árvore")


@dataclass(frozen=True)
class BoostModel:
    initial: float
    trees: tuple[TreeNode, ...]
    shrinkage: float
    hyperparams: TreeHyperParams

    def __post_init__(self) -> None:
        if not self.trees:
            raise DomainError("boosting precisa de pelo menos uma rodada")
        if not 0 < self.shrinkage <= 1:
            raise DomainError(f"shrinkage fora de (0, 1]: {self.shrinkage}")
