"""
Repository de Modelos - VesselSurrogate
Persistência de ensembles e modelos de árvore em JSON legível.
Floats são gravados com repr (ida e volta exata em f64).
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from ..core.errors import DomainError, ModelLoadError
from ..models.dataset import Scaler
from ..models.ensemble import EnsembleMetadata, EnsembleModel, SplitRecord
from ..models.network import Architecture, NetworkParameters, TrainHistory
from ..models.trees import BoostModel, ForestModel, TreeFamily, TreeHyperParams, TreeNode

logger = logging.getLogger(__name__)

ENSEMBLE_FORMAT = "vessel-surrogate/ensemble"
TREE_FORMAT = "vessel-surrogate/tree-model"
FORMAT_VERSION = 1


# ============= Esquemas dos arquivos ============= #

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LayerRecord(_Strict):
    weight: list[list[float]]
    bias: list[float]


class NetworkRecord(_Strict):
    layers: list[LayerRecord]


class HistoryRecord(_Strict):
    train_loss: list[float]
    val_loss: list[float]
    best_epoch: int
    stopped_early: bool


class SplitFileRecord(_Strict):
    seed: int
    n_data: int
    n_train: int
    test_indices: list[int]


class EnsembleFile(_Strict):
    format: Literal["vessel-surrogate/ensemble"]
    version: Literal[1]
    k: int
    master_seed: int
    member_seeds: list[int]
    architecture: Architecture
    scaler: Scaler
    fold_membership: list[int] = []
    histories: list[HistoryRecord] = []
    split: Optional[SplitFileRecord] = None
    members: list[NetworkRecord]


class TreeModelFile(_Strict):
    format: Literal["vessel-surrogate/tree-model"]
    version: Literal[1]
    family: TreeFamily
    hyperparams: TreeHyperParams
    scaler: Optional[Scaler] = None
    initial: Optional[float] = None
    shrinkage: Optional[float] = None
    seeds: list[int] = []
    trees: list[dict[str, Any]]


# ============= Conversões ============= #

def network_to_record(params: NetworkParameters) -> dict:
    return {
        "layers": [
            {"weight": w.tolist(), "bias": b.tolist()}
            for w, b in zip(params.weights, params.biases)
        ]
    }


def network_from_record(record: NetworkRecord, arch: Architecture, path: str) -> NetworkParameters:
    shapes = arch.layer_shapes()
    if len(record.layers) != len(shapes):
        raise ModelLoadError(
            f"{len(record.layers)} camadas, arquitetura exige {len(shapes)}", path=f"{path}.layers"
        )
    weights, biases = [], []
    for index, ((fan_out, fan_in), layer) in enumerate(zip(shapes, record.layers)):
        layer_path = f"{path}.layers[{index}]"
        try:
            weight = np.array(layer.weight, dtype=np.float64)
        except ValueError as exc:
            raise ModelLoadError("matriz irregular", path=f"{layer_path}.weight") from exc
        bias = np.array(layer.bias, dtype=np.float64)
        if weight.shape != (fan_out, fan_in):
            raise ModelLoadError(
                f"forma {weight.shape}, esperado {(fan_out, fan_in)}", path=f"{layer_path}.weight"
            )
        if bias.shape != (fan_out,):
            raise ModelLoadError(f"forma {bias.shape}, esperado {(fan_out,)}", path=f"{layer_path}.bias")
        weights.append(weight)
        biases.append(bias)
    try:
        return NetworkParameters(arch, tuple(weights), tuple(biases))
    except DomainError as exc:
        raise ModelLoadError(str(exc), path=path) from exc


def tree_to_record(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"value": node.value}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": tree_to_record(node.left),
        "right": tree_to_record(node.right),
    }


def tree_from_record(record: Any, path: str) -> TreeNode:
    if not isinstance(record, dict):
        raise ModelLoadError("nó deve ser um objeto", path=path)
    if set(record) == {"value"}:
        value = record["value"]
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not np.isfinite(value):
            raise ModelLoadError("valor de folha inválido", path=f"{path}.value")
        return TreeNode(value=float(value))
    if set(record) != {"feature", "threshold", "left", "right"}:
        raise ModelLoadError(f"campos inesperados {sorted(record)}", path=path)
    feature, threshold = record["feature"], record["threshold"]
    if not isinstance(feature, int) or isinstance(feature, bool) or feature < 0:
        raise ModelLoadError("feature inválida", path=f"{path}.feature")
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool) or not np.isfinite(threshold):
        raise ModelLoadError("threshold inválido", path=f"{path}.threshold")
    return TreeNode(
        feature=feature,
        threshold=float(threshold),
        left=tree_from_record(record["left"], f"{path}.left"),
        right=tree_from_record(record["right"], f"{path}.right"),
    )


def _validation_error(exc: ValidationError) -> ModelLoadError:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first["loc"])
    return ModelLoadError(first["msg"], path=location)


def _read_json(path: str | Path) -> Any:
    path = Path(path)
    if not path.exists():
        raise ModelLoadError(f"arquivo não encontrado: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelLoadError(f"JSON inválido ou truncado (linha {exc.lineno}): {exc.msg}") from exc


def _write_json(document: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # allow_nan=False: parâmetros são finitos por invariante
    path.write_text(json.dumps(document, indent=1, allow_nan=False) + "\n", encoding="utf-8")
    return path


class ModelRepository:
    """Gravação e leitura de modelos treinados; sem lógica de treino."""

    @staticmethod
    def save_ensemble(model: EnsembleModel, path: str | Path) -> Path:
        document = {
            "format": ENSEMBLE_FORMAT,
            "version": FORMAT_VERSION,
            "k": model.k,
            "master_seed": model.metadata.master_seed,
            "member_seeds": list(model.metadata.member_seeds),
            "architecture": model.architecture.model_dump(mode="json"),
            "scaler": model.scaler.model_dump(mode="json"),
            "fold_membership": list(model.metadata.fold_membership),
            "histories": [
                {
                    "train_loss": list(h.train_loss),
                    "val_loss": list(h.val_loss),
                    "best_epoch": h.best_epoch,
                    "stopped_early": h.stopped_early,
                }
                for h in model.metadata.histories
            ],
            "split": None
            if model.split is None
            else {
                "seed": model.split.seed,
                "n_data": model.split.n_data,
                "n_train": model.split.n_train,
                "test_indices": list(model.split.test_indices),
            },
            "members": [network_to_record(member) for member in model.members],
        }
        written = _write_json(document, path)
        logger.info("ensemble com %d membros gravado em %s", model.k, written)
        return written

    @staticmethod
    def load_ensemble(path: str | Path) -> EnsembleModel:
        """Valida o manifesto inteiro antes de construir o modelo (nada parcial)."""
        try:
            document = EnsembleFile.model_validate(_read_json(path))
        except ValidationError as exc:
            raise _validation_error(exc) from exc
        if document.k != len(document.members) or document.k != len(document.member_seeds):
            raise ModelLoadError(
                f"k = {document.k} incompatível com {len(document.members)} membros", path="k"
            )
        members = tuple(
            network_from_record(record, document.architecture, f"members[{index}]")
            for index, record in enumerate(document.members)
        )
        split = None
        if document.split is not None:
            split = SplitRecord(
                seed=document.split.seed,
                n_data=document.split.n_data,
                n_train=document.split.n_train,
                test_indices=tuple(document.split.test_indices),
            )
        return EnsembleModel(
            members=members,
            scaler=document.scaler,
            architecture=document.architecture,
            metadata=EnsembleMetadata(
                master_seed=document.master_seed,
                member_seeds=tuple(document.member_seeds),
                fold_membership=tuple(document.fold_membership),
                histories=tuple(
                    TrainHistory(list(h.train_loss), list(h.val_loss), h.best_epoch, h.stopped_early)
                    for h in document.histories
                ),
            ),
            split=split,
        )

    @staticmethod
    def save_tree_model(
        model: ForestModel | BoostModel, path: str | Path, scaler: Optional[Scaler] = None
    ) -> Path:
        is_forest = isinstance(model, ForestModel)
        document = {
            "format": TREE_FORMAT,
            "version": FORMAT_VERSION,
            "family": (TreeFamily.RANDOM_FOREST if is_forest else TreeFamily.GRADIENT_BOOST).value,
            "hyperparams": model.hyperparams.model_dump(mode="json"),
            "scaler": None if scaler is None else scaler.model_dump(mode="json"),
            "initial": None if is_forest else model.initial,
            "shrinkage": None if is_forest else model.shrinkage,
            "seeds": list(model.seeds) if is_forest else [],
            "trees": [tree_to_record(tree) for tree in model.trees],
        }
        return _write_json(document, path)

    @staticmethod
    def load_tree_model(path: str | Path) -> tuple[ForestModel | BoostModel, Optional[Scaler]]:
        try:
            document = TreeModelFile.model_validate(_read_json(path))
        except ValidationError as exc:
            raise _validation_error(exc) from exc
        trees = tuple(tree_from_record(record, f"trees[{i}]") for i, record in enumerate(document.trees))
        try:
            if document.family is TreeFamily.RANDOM_FOREST:
                model = ForestModel(trees=trees, seeds=tuple(document.seeds), hyperparams=document.hyperparams)
            else:
                if document.initial is None or document.shrinkage is None:
                    raise ModelLoadError("boosting sem initial/shrinkage", path="initial")
                model = BoostModel(
                    initial=document.initial,
                    trees=trees,
                    shrinkage=document.shrinkage,
                    hyperparams=document.hyperparams,
                )
        except DomainError as exc:
            raise ModelLoadError(str(exc), path="trees") from exc
        return model, document.scaler
