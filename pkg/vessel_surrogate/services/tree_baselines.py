"""
Modelos de comparação baseados em árvores - VesselSurrogate
Árvore de regressão CART, floresta aleatória (bagging + subconjunto de
features por nó) e gradient boosting de mínimos quadrados com shrinkage.
"""

from __future__ import annotations

import heapq
import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..core.errors import DomainError
from ..core.seeds import derive_seed
from ..models.dataset import Dataset
from ..models.trees import (
    BoostModel,
    ForestModel,
    SplitCriterion,
    TreeFamily,
    TreeHyperParams,
    TreeNode,
)
from .dataset import kfold

logger = logging.getLogger(__name__)

# Ganhos abaixo desta fração do SSE do nó são ruído de arredondamento
_GAIN_TOLERANCE = 1e-12


# ===================== Critérios de divisão ===================== #

def _variance_gains(sorted_targets: np.ndarray) -> np.ndarray:
    """
    Redução da soma dos quadrados para cada corte entre posições i e i+1.

    SSE(S) = Σy² - (Σy)²/|S|; o termo Σy² se cancela na diferença. Os alvos
    chegam centrados, senão (Σy)² em Pa perde os ganhos pequenos.
    """
    n = sorted_targets.shape[0]
    prefix = np.cumsum(sorted_targets)[:-1]
    total = float(np.sum(sorted_targets))
    left_n = np.arange(1, n)
    right_n = n - left_n
    return prefix**2 / left_n + (total - prefix) ** 2 / right_n - total**2 / n


def _running_abs_deviation(values: np.ndarray) -> np.ndarray:
    """Σ|y - mediana| de cada prefixo values[:i+1], via duas heaps."""
    lower: list[float] = []  # max-heap (valores negados)
    upper: list[float] = []
    lower_sum = upper_sum = 0.0
    costs = np.empty(values.shape[0])
    for i, value in enumerate(values):
        value = float(value)
        if not lower or value <= -lower[0]:
            heapq.heappush(lower, -value)
            lower_sum += value
        else:
            heapq.heappush(upper, value)
            upper_sum += value
        if len(lower) > len(upper) + 1:
            moved = -heapq.heappop(lower)
            lower_sum -= moved
            heapq.heappush(upper, moved)
            upper_sum += moved
        elif len(upper) > len(lower):
            moved = heapq.heappop(upper)
            upper_sum -= moved
            heapq.heappush(lower, -moved)
            lower_sum += moved
        median = -lower[0]
        costs[i] = (median * len(lower) - lower_sum) + (upper_sum - median * len(upper))
    return costs


def _mae_gains(sorted_targets: np.ndarray) -> np.ndarray:
    left = _running_abs_deviation(sorted_targets)
    right = _running_abs_deviation(sorted_targets[::-1])[::-1]
    return left[-1] - (left[:-1] + right[1:])


def _best_split(
    inputs: np.ndarray,
    targets: np.ndarray,
    features,
    criterion: SplitCriterion,
    min_samples_leaf: int,
) -> tuple[int, float, np.ndarray] | None:
    """
    Melhor (feature, threshold) entre pontos médios de valores únicos consecutivos.

    Empates ficam com a primeira feature e o menor threshold. Devolve None
    quando nenhum corte reduz o critério.
    """
    n = targets.shape[0]
    centred = targets - targets.mean()
    best: tuple[float, int, float] | None = None
    for feature in features:
        order = np.argsort(inputs[:, feature], kind="stable")
        values = inputs[order, feature]
        sorted_targets = centred[order]
        if criterion is SplitCriterion.VARIANCE_REDUCTION:
            gains = _variance_gains(sorted_targets)
        else:
            gains = _mae_gains(sorted_targets)
        positions = np.arange(1, n)
        allowed = (values[1:] > values[:-1]) & (positions >= min_samples_leaf) & (n - positions >= min_samples_leaf)
        if not np.any(allowed):
            continue
        candidates = np.flatnonzero(allowed)
        winner = candidates[np.argmax(gains[candidates])]
        gain = float(gains[winner])
        if best is None or gain > best[0]:
            threshold = 0.5 * (values[winner] + values[winner + 1])
            best = (gain, int(feature), float(threshold))
    parent_sse = float(np.sum(centred**2))
    if best is None or not best[0] > _GAIN_TOLERANCE * parent_sse:
        return None
    gain, feature, threshold = best
    return feature, threshold, inputs[:, feature] <= threshold


def _grow(
    inputs: np.ndarray,
    targets: np.ndarray,
    hp: TreeHyperParams,
    depth: int,
    rng: np.random.Generator | None,
) -> TreeNode:
    if np.all(targets == targets[0]):
        return TreeNode(value=float(targets[0]))
    leaf = TreeNode(value=float(np.mean(targets)))
    if targets.shape[0] < 2 * hp.min_samples_leaf:
        return leaf
    if hp.max_depth is not None and depth >= hp.max_depth:
        return leaf
    n_features = inputs.shape[1]
    if rng is not None and hp.max_features is not None and hp.max_features < n_features:
        features = np.sort(rng.choice(n_features, size=hp.max_features, replace=False))
    else:
        features = range(n_features)
    split = _best_split(inputs, targets, features, hp.criterion, hp.min_samples_leaf)
    if split is None:
        return leaf
    feature, threshold, goes_left = split
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=_grow(inputs[goes_left], targets[goes_left], hp, depth + 1, rng),
        right=_grow(inputs[~goes_left], targets[~goes_left], hp, depth + 1, rng),
    )


def fit_cart(data: Dataset, hp: TreeHyperParams, *, rng: np.random.Generator | None = None) -> TreeNode:
    """Crescimento guloso de cima para baixo; folhas prevêem a média dos alvos."""
    if len(data) == 0:
        raise DomainError("não é possível ajustar uma árvore sem amostras")
    return _grow(data.inputs, data.targets, hp, 0, rng)


def predict_tree(tree: TreeNode, x) -> float:
    node = tree
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.value


def predict_tree_batch(tree: TreeNode, inputs) -> np.ndarray:
    """Roteia todas as linhas de uma vez, nó a nó."""
    inputs = np.asarray(inputs, dtype=np.float64)
    out = np.empty(inputs.shape[0])
    stack = [(tree, np.arange(inputs.shape[0]))]
    while stack:
        node, rows = stack.pop()
        if rows.size == 0:
            continue
        if node.is_leaf:
            out[rows] = node.value
            continue
        goes_left = inputs[rows, node.feature] <= node.threshold
        stack.append((node.left, rows[goes_left]))
        stack.append((node.right, rows[~goes_left]))
    return out


# ===================== Floresta aleatória ===================== #

def _fit_forest_tree(data: Dataset, hp: TreeHyperParams, seed: int) -> TreeNode:
    rng = np.random.default_rng(seed)
    if hp.bootstrap:
        data = data.subset(rng.integers(0, len(data), size=len(data)))
    return fit_cart(data, hp, rng=rng)


def fit_random_forest(data: Dataset, hp: TreeHyperParams, seed: int, *, jobs: int = 1) -> ForestModel:
    """Cada árvore em uma reamostragem bootstrap; predição = média das árvores."""
    if len(data) == 0:
        raise DomainError("não é possível ajustar a floresta sem amostras")
    seeds = tuple(derive_seed(seed, f"forest/tree-{i}") for i in range(hp.n_trees))
    if jobs > 1 and hp.n_trees > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            trees = list(pool.map(_fit_forest_tree, [data] * hp.n_trees, [hp] * hp.n_trees, seeds))
    else:
        trees = [_fit_forest_tree(data, hp, s) for s in seeds]
    return ForestModel(trees=tuple(trees), seeds=seeds, hyperparams=hp)


def predict_forest(model: ForestModel, inputs) -> np.ndarray:
    return np.mean([predict_tree_batch(tree, inputs) for tree in model.trees], axis=0)


# ===================== Gradient boosting ===================== #

def fit_gradient_boost(data: Dataset, hp: TreeHyperParams) -> BoostModel:
    """
    F0 = média; a cada rodada uma CART de erro quadrático ajusta os
    resíduos y - F_{m-1}(x) e F_m = F_{m-1} + ν·árvore_m.
    """
    if len(data) == 0:
        raise DomainError("não é possível ajustar o boosting sem amostras")
    round_hp = hp.model_copy(update={"criterion": SplitCriterion.VARIANCE_REDUCTION})
    initial = float(np.mean(data.targets))
    current = np.full(len(data), initial)
    trees = []
    for _ in range(hp.n_trees):
        residuals = data.targets - current
        tree = fit_cart(Dataset(data.inputs, residuals, data.provenance), round_hp)
        current = current + hp.shrinkage * predict_tree_batch(tree, data.inputs)
        trees.append(tree)
    return BoostModel(initial=initial, trees=tuple(trees), shrinkage=hp.shrinkage, hyperparams=hp)


def predict_boost(model: BoostModel, inputs) -> np.ndarray:
    inputs = np.asarray(inputs, dtype=np.float64)
    prediction = np.full(inputs.shape[0], model.initial)
    for tree in model.trees:
        prediction = prediction + model.shrinkage * predict_tree_batch(tree, inputs)
    return prediction


# ===================== Busca em grade ===================== #

def fit_family(
    family: TreeFamily, data: Dataset, hp: TreeHyperParams, seed: int, *, jobs: int = 1
) -> ForestModel | BoostModel:
    if TreeFamily(family) is TreeFamily.RANDOM_FOREST:
        return fit_random_forest(data, hp, seed, jobs=jobs)
    return fit_gradient_boost(data, hp)


def predict_model(model: ForestModel | BoostModel, inputs) -> np.ndarray:
    if isinstance(model, ForestModel):
        return predict_forest(model, inputs)
    return predict_boost(model, inputs)


def grid_search(
    data: Dataset,
    grid: list[TreeHyperParams],
    k: int,
    seed: int,
    *,
    family: TreeFamily = TreeFamily.RANDOM_FOREST,
    jobs: int = 1,
) -> tuple[TreeHyperParams, list[tuple[TreeHyperParams, float]]]:
    """
    Média de |ΔZ| em validação cruzada k-fold para cada célula da grade.

    Os alvos de `data` devem estar em unidades físicas (não nulos). Empates
    ficam com o modelo menor: menos árvores, depois menor profundidade.
    """
    if not grid:
        raise DomainError("grade de hiperparâmetros vazia")
    family = TreeFamily(family)
    folds = kfold(data, k, derive_seed(seed, "grid/folds"))
    table: list[tuple[TreeHyperParams, float]] = []
    for cell_index, hp in enumerate(grid):
        residual_sum = 0.0
        for fold in range(k):
            held_out = data.subset(folds.fold_indices(fold))
            model = fit_family(
                family,
                data.subset(folds.complement_indices(fold)),
                hp,
                derive_seed(seed, f"grid/cell-{cell_index}/fold-{fold}"),
                jobs=jobs,
            )
            prediction = predict_model(model, held_out.inputs)
            residual_sum += float(np.sum(np.abs((held_out.targets - prediction) / held_out.targets)))
        score = residual_sum / len(data)
        logger.info("grade %s: %s -> |ΔZ| médio %.5f", family.value, hp.model_dump(), score)
        table.append((hp, score))
    best, _ = min(table, key=lambda row: (row[1], row[0].size_key()))
    return best, table
