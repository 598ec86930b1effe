"""
Métricas de avaliação - VesselSurrogate
Resíduo relativo ΔZ = (V_truth - V_pred)/V_truth, acurácia (|ΔZ| < 0.10),
outliers (|ΔZ| > 0.50) e desvio padrão dos erros em MPa.
"""

from __future__ import annotations

import math

import numpy as np

from ..core.errors import DomainError
from ..models.metrics import BenchmarkRow, MetricsReport
from ..views.report_view import BenchmarkTable

ACCURACY_THRESHOLD = 0.10
OUTLIER_THRESHOLD = 0.50
PA_PER_MPA = 1e6


def _paired(truth, pred) -> tuple[np.ndarray, np.ndarray]:
    truth = np.asarray(truth, dtype=np.float64).reshape(-1)
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    if truth.shape != pred.shape:
        raise DomainError(f"tamanhos diferentes: truth {truth.shape[0]}, pred {pred.shape[0]}")
    if truth.size == 0:
        raise DomainError("métricas de conjunto vazio")
    zeros = np.flatnonzero(truth == 0)
    if zeros.size:
        raise DomainError(f"valor verdadeiro nulo no índice {int(zeros[0])}: ΔZ indefinido")
    return truth, pred


def residuals(truth, pred) -> np.ndarray:
    truth, pred = _paired(truth, pred)
    return (truth - pred) / truth


def report(truth, pred) -> MetricsReport:
    """Relatório das quatro estatísticas (mais diagnósticos) sobre pares em Pa."""
    truth, pred = _paired(truth, pred)
    delta = (truth - pred) / truth
    magnitude = np.abs(delta)
    errors_mpa = (truth - pred) / PA_PER_MPA
    n = int(truth.shape[0])
    # somas corretamente arredondadas: o resultado independe da ordem
    mean_error = math.fsum(errors_mpa) / n
    return MetricsReport(
        n=n,
        accuracy=100.0 * int(np.count_nonzero(magnitude < ACCURACY_THRESHOLD)) / n,
        mean_abs_residual=math.fsum(magnitude) / n,
        outliers=int(np.count_nonzero(magnitude > OUTLIER_THRESHOLD)),
        deviation=math.sqrt(math.fsum((errors_mpa - mean_error) ** 2) / n),
        signed_mean_residual=math.fsum(delta) / n,
        mae_mpa=math.fsum(np.abs(errors_mpa)) / n,
        rmse_mpa=math.sqrt(math.fsum(errors_mpa**2) / n),
    )


def benchmark_table(rows: list[BenchmarkRow]) -> BenchmarkTable:
    """Tabela no formato de métricas-chave (Accuracy, Residual, Outlier, Deviation)."""
    if not rows:
        raise DomainError("tabela de benchmark precisa de pelo menos um relatório")
    return BenchmarkTable(rows=list(rows))
