"""
Rede neural feita à mão - VesselSurrogate
MLP com 6 camadas ocultas (linear + ReLU), dropout invertido, resíduos
identidade, saída linear, perda L1, retropropagação exata, Adam e
inicialização de Xavier. Toda a aritmética em float64.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.errors import DomainError, TrainingError
from ..core.seeds import derive_seed
from ..models.dataset import Dataset
from ..models.network import (
    HIDDEN_LAYERS,
    AdamState,
    Architecture,
    Gradients,
    NetworkParameters,
    TrainConfig,
    TrainHistory,
)

logger = logging.getLogger(__name__)

# Uma máscara por camada oculta; None = sem dropout naquela camada
Masks = list[Optional[np.ndarray]]


@dataclass(frozen=True, eq=False)
class ForwardCache:
    inputs: np.ndarray
    pre_activations: list
    outputs: list
    masks: Masks


def param_count(arch: Architecture) -> int:
    """Σ (fan_in + 1)·fan_out sobre todas as camadas lineares."""
    return sum((fan_in + 1) * fan_out for fan_out, fan_in in arch.layer_shapes())


def init_network(arch: Architecture, seed: int) -> NetworkParameters:
    """Xavier (Glorot) uniforme em ±√(6/(fan_in + fan_out)); biases nulos."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_out, fan_in in arch.layer_shapes():
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return NetworkParameters(arch, tuple(weights), tuple(biases))


def draw_masks(arch: Architecture, batch: int, rng: np.random.Generator) -> Masks:
    """Máscaras de dropout invertido, já escaladas por 1/keep."""
    masks: Masks = [None] * HIDDEN_LAYERS
    if arch.dropout_rate == 0:
        return masks
    keep = 1.0 - arch.dropout_rate
    for layer in sorted(arch.dropout_after):
        width = arch.hidden_widths[layer - 1]
        masks[layer - 1] = (rng.random((batch, width)) >= arch.dropout_rate) / keep
    return masks


def _check_inputs(params: NetworkParameters, inputs) -> np.ndarray:
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim == 1:
        inputs = inputs.reshape(1, -1)
    if inputs.shape[1] != params.architecture.input_dim:
        raise DomainError(
            f"entrada com {inputs.shape[1]} variáveis, esperado {params.architecture.input_dim}"
        )
    if not np.all(np.isfinite(inputs)):
        raise DomainError("entrada não finita")
    return inputs


def _forward(params: NetworkParameters, inputs: np.ndarray, masks: Masks) -> tuple[np.ndarray, ForwardCache]:
    arch = params.architecture
    pre_activations, outputs = [], []
    current = inputs
    for j in range(HIDDEN_LAYERS):
        pre = current @ params.weights[j].T + params.biases[j]
        activation = np.maximum(pre, 0.0)
        if masks[j] is not None:
            activation = activation * masks[j]
        # o resíduo soma a saída pós-ativação da camada de origem
        for source in arch.skips_into(j + 1):
            activation = activation + outputs[source - 1]
        pre_activations.append(pre)
        outputs.append(activation)
        current = activation
    prediction = current @ params.weights[-1].T + params.biases[-1]
    return prediction[:, 0], ForwardCache(inputs, pre_activations, outputs, masks)


def forward_batch(
    params: NetworkParameters,
    inputs,
    *,
    rng: np.random.Generator | None = None,
    masks: Masks | None = None,
) -> np.ndarray:
    """
    Propagação direta de um lote (n, input_dim).

    Modo treino quando `rng` (sorteia máscaras) ou `masks` são dados;
    caso contrário modo avaliação, determinístico e sem dropout.
    """
    inputs = _check_inputs(params, inputs)
    if masks is None:
        masks = (
            draw_masks(params.architecture, inputs.shape[0], rng)
            if rng is not None
            else [None] * HIDDEN_LAYERS
        )
    return _forward(params, inputs, masks)[0]


def forward(params: NetworkParameters, x, *, rng: np.random.Generator | None = None) -> float:
    return float(forward_batch(params, np.asarray(x, dtype=np.float64).reshape(1, -1), rng=rng)[0])


def predict_batch(params: NetworkParameters, inputs) -> np.ndarray:
    return forward_batch(params, inputs)


def l1_loss(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    truth = np.asarray(truth, dtype=np.float64).reshape(-1)
    if pred.shape != truth.shape:
        raise DomainError(f"tamanhos diferentes: pred {pred.shape[0]}, truth {truth.shape[0]}")
    if pred.size == 0:
        raise DomainError("perda L1 de lote vazio")
    return float(np.mean(np.abs(pred - truth)))


def backward(
    params: NetworkParameters,
    inputs,
    targets,
    *,
    rng: np.random.Generator | None = None,
    masks: Masks | None = None,
) -> tuple[float, Gradients]:
    """
    Perda L1 do lote e seu gradiente exato em relação a θ.

    O subgradiente de |r| em r = 0 é 0. As máscaras sorteadas (ou recebidas)
    na ida são as mesmas usadas na volta.
    """
    inputs = _check_inputs(params, inputs)
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if inputs.shape[0] == 0:
        raise DomainError("lote vazio")
    arch = params.architecture
    if masks is None:
        masks = draw_masks(arch, inputs.shape[0], rng) if rng is not None else [None] * HIDDEN_LAYERS
    prediction, cache = _forward(params, inputs, masks)
    residual = prediction - targets
    loss = float(np.mean(np.abs(residual)))
    upstream = np.sign(residual) / inputs.shape[0]

    grad_w: list = [None] * (HIDDEN_LAYERS + 1)
    grad_b: list = [None] * (HIDDEN_LAYERS + 1)
    grad_w[-1] = upstream[None, :] @ cache.outputs[-1]
    grad_b[-1] = np.array([upstream.sum()])

    grad_out = [np.zeros_like(z) for z in cache.outputs]
    grad_out[-1] += np.outer(upstream, params.weights[-1][0])
    for j in reversed(range(HIDDEN_LAYERS)):
        delta = grad_out[j]
        for source in arch.skips_into(j + 1):
            grad_out[source - 1] += delta
        if cache.masks[j] is not None:
            delta = delta * cache.masks[j]
        delta = delta * (cache.pre_activations[j] > 0)
        layer_input = cache.inputs if j == 0 else cache.outputs[j - 1]
        grad_w[j] = delta.T @ layer_input
        grad_b[j] = delta.sum(axis=0)
        if j > 0:
            grad_out[j - 1] += delta @ params.weights[j]
    return loss, Gradients(tuple(grad_w), tuple(grad_b))


def adam_step(
    state: AdamState, params: NetworkParameters, grads: Gradients
) -> tuple[NetworkParameters, AdamState]:
    """Um passo do Adam com correção de viés; devolve novos parâmetros e estado."""
    step = state.step + 1
    arrays = (*params.weights, *params.biases)
    gradients = (*grads.weights, *grads.biases)
    if len(arrays) != len(gradients) or len(arrays) != len(state.first_moments):
        raise DomainError("estado do Adam, parâmetros e gradientes com formatos diferentes")
    correction1 = 1.0 - state.beta1**step
    correction2 = 1.0 - state.beta2**step
    updated, first, second = [], [], []
    for value, grad, m, v in zip(arrays, gradients, state.first_moments, state.second_moments):
        if grad.shape != value.shape:
            raise DomainError(f"gradiente {grad.shape} incompatível com parâmetro {value.shape}")
        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        updated.append(value - state.lr * m_hat / (np.sqrt(v_hat) + state.eps))
        first.append(m)
        second.append(v)
    n_layers = len(params.weights)
    new_params = NetworkParameters(
        params.architecture, tuple(updated[:n_layers]), tuple(updated[n_layers:])
    )
    new_state = AdamState(
        first_moments=tuple(first),
        second_moments=tuple(second),
        step=step,
        lr=state.lr,
        beta1=state.beta1,
        beta2=state.beta2,
        eps=state.eps,
    )
    return new_params, new_state


def train(
    arch: Architecture,
    train_data: Dataset,
    val_data: Dataset,
    config: TrainConfig,
) -> tuple[NetworkParameters, TrainHistory]:
    """
    Mini-batch Adam sobre a perda L1 com parada antecipada.

    Os dados já devem estar normalizados. Após cada época a perda L1 de
    validação é medida em modo avaliação; o treino para após `patience`
    épocas sem melhora e devolve os parâmetros da melhor época.
    """
    if len(train_data) == 0:
        raise DomainError("conjunto de treino vazio")
    if len(val_data) == 0:
        raise DomainError("conjunto de validação vazio")
    params = init_network(arch, config.seed)
    state = AdamState.zeros_like(
        params, lr=config.learning_rate, beta1=config.beta1, beta2=config.beta2, eps=config.eps
    )
    rng = np.random.default_rng(derive_seed(config.seed, "minibatch"))
    inputs, targets = train_data.inputs, train_data.targets
    n = len(train_data)

    history = TrainHistory()
    best_params = params
    waited = 0
    for epoch in range(config.max_epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        try:
            for start in range(0, n, config.batch_size):
                batch = order[start:start + config.batch_size]
                loss, grads = backward(params, inputs[batch], targets[batch], rng=rng)
                params, state = adam_step(state, params, grads)
                epoch_loss += loss * batch.shape[0]
        except DomainError as exc:
            raise TrainingError(f"divergência na época {epoch}: {exc}", epoch=epoch) from exc
        train_loss = epoch_loss / n
        val_loss = l1_loss(predict_batch(params, val_data.inputs), val_data.targets)
        if not (math.isfinite(train_loss) and math.isfinite(val_loss)):
            raise TrainingError(f"perda não finita na época {epoch}", epoch=epoch)
        history.train_loss.append(train_loss)
        history.val_loss.append(val_loss)
        logger.debug("época %d: treino %.6f validação %.6f", epoch, train_loss, val_loss)

        if val_loss < history.best_val_loss:
            history.best_epoch = epoch
            best_params = params
            waited = 0
        else:
            waited += 1
            if waited >= config.patience:
                history.stopped_early = True
                break

    logger.info(
        "treino encerrado após %d épocas; melhor época %d (L1 validação %.6f)",
        history.epochs,
        history.best_epoch,
        history.best_val_loss,
    )
    return best_params, history
