"""
Repository de Datasets - VesselSurrogate
Camada de acesso a arquivos CSV pura - sem lógica de treino.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Mapping, Optional

import numpy as np
import pandas as pd

from ..core.errors import DataFormatError
from ..models.dataset import Dataset, Provenance
from ..models.design import DESIGN_VARIABLES

logger = logging.getLogger(__name__)

DESIGN_COLUMNS: tuple[str, ...] = ("depth_m", "length_m", "thickness_m", "radius_m")
TARGET_COLUMN = "max_vm_pa"
CSV_COLUMNS: tuple[str, ...] = (*DESIGN_COLUMNS, TARGET_COLUMN)
PREDICTION_COLUMNS: tuple[str, ...] = (*DESIGN_COLUMNS, "surrogate_mpa", "spread_mpa", "oracle_mpa", "feasible")
FLOAT_FORMAT = "%.17g"  # 17 dígitos significativos: ida e volta exata em f64


class DatasetRepository:
    """
    Leitura e escrita de datasets em CSV (UTF-8, vírgula, ponto decimal).
    `column_map` traduz nomes canônicos para os de arquivos externos e
    `unit_factors` converte unidades na importação.
    """

    @staticmethod
    def write_csv(data: Dataset, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(data.inputs, columns=list(DESIGN_COLUMNS))
        frame[TARGET_COLUMN] = data.targets
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8", lineterminator="\n")
        logger.info("dataset com %d amostras gravado em %s", len(data), path)
        return path

    @staticmethod
    def read_csv(
        path: str | Path,
        column_map: Optional[Mapping[str, str]] = None,
        unit_factors: Optional[Mapping[str, float]] = None,
        provenance: Provenance = Provenance.IMPORTED,
    ) -> Dataset:
        """
        Lê um dataset completo; cada violação é reportada com o número da linha.
        A origem dos alvos não está no arquivo: quem chama informa `provenance`.
        """
        matrix = _read_columns(path, CSV_COLUMNS, column_map, unit_factors)
        _check_designs(matrix[:, : len(DESIGN_COLUMNS)])
        return Dataset(matrix[:, : len(DESIGN_COLUMNS)], matrix[:, -1], Provenance(provenance))

    @staticmethod
    def read_designs_csv(
        path: str | Path,
        column_map: Optional[Mapping[str, str]] = None,
        unit_factors: Optional[Mapping[str, float]] = None,
    ) -> np.ndarray:
        """Lê apenas as colunas de projeto (entrada do `predict` em lote)."""
        matrix = _read_columns(path, DESIGN_COLUMNS, column_map, unit_factors)
        _check_designs(matrix)
        return matrix

    @staticmethod
    def write_predictions_csv(frame: pd.DataFrame, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8", lineterminator="\n")
        return path


# ============= Funções auxiliares ============= #

def _line(row_index: int) -> int:
    # linha 1 é o cabeçalho
    return row_index + 2


def _read_columns(
    path: str | Path,
    columns: tuple[str, ...],
    column_map: Optional[Mapping[str, str]],
    unit_factors: Optional[Mapping[str, float]],
) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"arquivo não encontrado: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as exc:
        raise DataFormatError(f"{path}: arquivo vazio, sem cabeçalho") from exc
    column_map = dict(column_map or {})
    unit_factors = dict(unit_factors or {})

    matrix = np.empty((len(frame), len(columns)))
    for j, canonical in enumerate(columns):
        source = column_map.get(canonical, canonical)
        if source not in frame.columns:
            raise DataFormatError(f"{path}: coluna ausente '{source}' (para '{canonical}')")
        for i, cell in enumerate(frame[source]):
            try:
                matrix[i, j] = float(cell)
            except ValueError:
                raise DataFormatError(
                    f"{path}: linha {_line(i)}, coluna '{source}': valor não numérico {cell!r}"
                ) from None
        if canonical in unit_factors:
            matrix[:, j] *= float(unit_factors[canonical])
    bad = ~np.all(np.isfinite(matrix), axis=1)
    if np.any(bad):
        raise DataFormatError(f"{path}: linha {_line(int(np.flatnonzero(bad)[0]))}: valor não finito")
    return matrix


def _check_designs(designs: np.ndarray) -> None:
    depth, length, thickness, radius = (designs[:, i] for i in range(len(DESIGN_VARIABLES)))
    checks = (
        (depth < 0, "depth negativo"),
        (length < 0, "length negativo"),
        (thickness <= 0, "thickness deve ser positivo"),
        (radius <= 0, "radius deve ser positivo"),
        (thickness >= radius, "thickness >= radius (raio interno não positivo)"),
    )
    for mask, message in checks:
        if np.any(mask):
            raise DataFormatError(f"linha {_line(int(np.flatnonzero(mask)[0]))}: {message}")
