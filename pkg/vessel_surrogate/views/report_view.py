"""
Visualização dos resultados - VesselSurrogate
Tabela de métricas-chave em texto alinhado e em CSV (pandas).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import pandas as pd

from ..models.metrics import BenchmarkRow, MetricsReport

CSV_HEADER = (
    "model",
    "accuracy",
    "residual",
    "outlier",
    "deviation",
    "n",
    "train_seconds",
    "predict_ms_per_sample",
)

_TEXT_HEADER = {
    "model": "Model",
    "accuracy": "Accuracy",
    "residual": "Residual",
    "outlier": "Outlier",
    "deviation": "Deviation",
    "train_seconds": "Train [s]",
    "predict_ms_per_sample": "Predict [ms/sample]",
}


def _optional(value: float | None, fmt: str) -> str:
    return "-" if value is None else format(value, fmt)


def _missing_to_none(value) -> float | None:
    return None if value is None or math.isnan(value) else float(value)


@dataclass
class BenchmarkTable:
    rows: list[BenchmarkRow] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        records = [
            {
                "model": row.name,
                "accuracy": row.report.accuracy,
                "residual": row.report.mean_abs_residual,
                "outlier": row.report.outliers,
                "deviation": row.report.deviation,
                "n": row.report.n,
                "train_seconds": row.train_seconds,
                "predict_ms_per_sample": row.predict_ms_per_sample,
            }
            for row in self.rows
        ]
        return pd.DataFrame.from_records(records, columns=list(CSV_HEADER))

    def to_text(self) -> str:
        frame = pd.DataFrame(
            {
                "model": [row.name for row in self.rows],
                "accuracy": [f"{row.report.accuracy:.2f}%" for row in self.rows],
                "residual": [f"{row.report.mean_abs_residual:.3f}" for row in self.rows],
                "outlier": [str(row.report.outliers) for row in self.rows],
                "deviation": [f"{row.report.deviation:.2f}" for row in self.rows],
                "train_seconds": [_optional(row.train_seconds, ".1f") for row in self.rows],
                "predict_ms_per_sample": [_optional(row.predict_ms_per_sample, ".4f") for row in self.rows],
            }
        ).rename(columns=_TEXT_HEADER)
        return frame.to_string(index=False)

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False, lineterminator="\n")

    @classmethod
    def from_csv(cls, text: str) -> "BenchmarkTable":
        """Relê a saída de `to_csv` (apenas as quatro métricas e os tempos)."""
        frame = pd.read_csv(io.StringIO(text), dtype={"model": str}, float_precision="round_trip")
        rows = [
            BenchmarkRow(
                name=record["model"],
                report=MetricsReport(
                    n=int(record["n"]),
                    accuracy=float(record["accuracy"]),
                    mean_abs_residual=float(record["residual"]),
                    outliers=int(record["outlier"]),
                    deviation=float(record["deviation"]),
                ),
                train_seconds=_missing_to_none(record["train_seconds"]),
                predict_ms_per_sample=_missing_to_none(record["predict_ms_per_sample"]),
            )
            for record in frame.to_dict(orient="records")
        ]
        return cls(rows=rows)
