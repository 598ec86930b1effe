from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class MetricsReport(BaseModel):
    """Estatísticas de avaliação de um modelo em um conjunto."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    accuracy: float = Field(ge=0, le=100, description="% de amostras com |ΔZ| < 0.10")
    mean_abs_residual: float = Field(ge=0, description="média de |ΔZ|")
    outliers: int = Field(ge=0, description="η: amostras com |ΔZ| > 0.50")
    deviation: float = Field(ge=0, description="σ populacional dos erros, MPa")
    signed_mean_residual: float = 0.0
    mae_mpa: float = Field(default=0.0, ge=0)
    rmse_mpa: float = Field(default=0.0, ge=0)


class BenchmarkRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    report: MetricsReport
    train_seconds: float | None = None
    predict_ms_per_sample: float | None = None
