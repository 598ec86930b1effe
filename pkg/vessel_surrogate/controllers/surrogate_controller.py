"""
Controller do Surrogate - VesselSurrogate
Orquestra geração de dados, treino, avaliação, benchmark e predição.
Cada método devolve um envelope {"success", "data", "message"} e nunca
propaga exceções para quem chama.
"""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..core.config import RunConfig
from ..core.errors import DomainError, SurrogateError
from ..core.seeds import derive_seed
from ..models.dataset import Dataset, Provenance
from ..models.design import DesignPoint
from ..models.ensemble import EnsembleModel, SplitRecord
from ..models.metrics import BenchmarkRow
from ..models.trees import TreeFamily
from ..repositories.dataset_repository import DESIGN_COLUMNS, PREDICTION_COLUMNS, DatasetRepository
from ..repositories.model_repository import ModelRepository
from ..services import dataset as dataset_service
from ..services import ensemble as ensemble_service
from ..services import metrics as metrics_service
from ..services import physics_oracle
from ..services import tree_baselines
from ..services.neural_net import param_count
from ..views.envelope import envelope, falha

logger = logging.getLogger(__name__)

# Custo de referência de uma simulação de elementos finitos (segundos)
FEA_SECONDS_PER_SIMULATION = 202.0
PA_PER_MPA = 1e6

ENSEMBLE_ROW = "Deep ensemble"
FOREST_ROW = "Random Forest"
BOOST_ROW = "Gradient Boost"


def _describe(exc: Exception) -> str:
    """Mensagem legível; erros de validação viram uma linha por campo."""
    if isinstance(exc, ValidationError):
        return "; ".join(
            f"{'.'.join(str(p) for p in error['loc']) or 'projeto'}: {error['msg']}" for error in exc.errors()
        )
    return str(exc)


def _guarded(action: str, func, *args, **kwargs) -> dict:
    try:
        return func(*args, **kwargs)
    except (SurrogateError, ValueError, OSError) as exc:
        logger.error("%s falhou: %s", action, _describe(exc))
        return falha(_describe(exc))
    except Exception as exc:
        logger.exception("erro inesperado em %s", action)
        return falha(f"Erro interno: {exc}")


def _load_dataset(config: RunConfig, data_path: Optional[str]) -> Dataset:
    return DatasetRepository.read_csv(
        data_path or config.data_path,
        column_map=config.column_map,
        unit_factors=config.unit_factors,
    )


def _split(config: RunConfig, data: Dataset) -> tuple[Dataset, Dataset, SplitRecord]:
    split_seed = derive_seed(config.seed, "split")
    train_idx, test_idx = dataset_service.split_indices(len(data), config.n_train, split_seed)
    record = SplitRecord(
        seed=split_seed,
        n_data=len(data),
        n_train=config.n_train,
        test_indices=tuple(int(i) for i in test_idx),
    )
    return data.subset(train_idx), data.subset(test_idx), record


def _train_ensemble(config: RunConfig, train: Dataset, split: Optional[SplitRecord]) -> EnsembleModel:
    return ensemble_service.train_ensemble(
        train,
        config.ensemble_k,
        config.architecture(),
        config.train_config(),
        master_seed=config.seed,
        val_fraction=config.val_fraction,
        jobs=config.jobs,
        split=split,
    )


def _timed_prediction(predict, inputs: np.ndarray) -> tuple[np.ndarray, float]:
    start = time.perf_counter()
    prediction = predict(inputs)
    elapsed = time.perf_counter() - start
    return prediction, 1000.0 * elapsed / max(inputs.shape[0], 1)


class SurrogateController:
    """Orquestração dos subcomandos da linha de comando."""

    # ===================== gen-data ===================== #

    @staticmethod
    def generate_data(config: RunConfig, out: Optional[str] = None) -> dict:
        """Amostra o espaço de projeto, avalia o oráculo e grava o CSV."""
        return _guarded("gen-data", SurrogateController._generate_data, config, out)

    @staticmethod
    def _generate_data(config: RunConfig, out: Optional[str]) -> dict:
        designs = dataset_service.sample_matrix(
            config.design_space(),
            config.n_samples,
            derive_seed(config.seed, "sampling"),
            config.sampling_method,
        )
        start = time.perf_counter()
        data = dataset_service.generate_dataset(designs, jobs=config.jobs, **config.water())
        elapsed = time.perf_counter() - start
        path = DatasetRepository.write_csv(data, out or config.data_path)
        per_sample = elapsed / len(data)
        logger.info("oráculo: %.3e s por amostra", per_sample)
        return envelope(
            True,
            {"path": str(path), "n": len(data), "seconds_per_sample": per_sample},
            f"{len(data)} amostras gravadas em {path} ({per_sample:.3e} s/amostra)",
        )

    # ===================== train ===================== #

    @staticmethod
    def train(config: RunConfig, data_path: Optional[str] = None, out: Optional[str] = None) -> dict:
        """Divide treino/teste, treina o ensemble e grava o modelo com a partição."""
        return _guarded("train", SurrogateController._train, config, data_path, out)

    @staticmethod
    def _train(config: RunConfig, data_path: Optional[str], out: Optional[str]) -> dict:
        data = _load_dataset(config, data_path)
        train, _, split = _split(config, data)
        model = _train_ensemble(config, train, split)
        path = ModelRepository.save_ensemble(model, out or config.model_path)

        n_params = param_count(model.architecture)
        oof = None
        if model.k >= 2:
            oof_report = metrics_service.report(
                train.targets, ensemble_service.out_of_fold_predictions(model, train)
            )
            oof = oof_report.model_dump()
            logger.info("fora do fold: acurácia %.2f%%, |ΔZ| médio %.4f", oof_report.accuracy, oof_report.mean_abs_residual)
        histories = [
            {"member": index, "epochs": h.epochs, "best_epoch": h.best_epoch, "best_val_loss": h.best_val_loss}
            for index, h in enumerate(model.metadata.histories)
        ]
        return envelope(
            True,
            {
                "path": str(path),
                "k": model.k,
                "param_count": n_params,
                "n_train": len(train),
                "n_test": len(split.test_indices),
                "out_of_fold": oof,
                "histories": histories,
            },
            f"ensemble de {model.k} membros ({n_params} parâmetros por rede) gravado em {path}",
        )

    # ===================== eval ===================== #

    @staticmethod
    def evaluate(
        config: RunConfig,
        model_path: Optional[str] = None,
        data_path: Optional[str] = None,
        out: Optional[str] = None,
    ) -> dict:
        """Métricas do ensemble gravado na partição de teste guardada (ou no CSV inteiro)."""
        return _guarded("eval", SurrogateController._evaluate, config, model_path, data_path, out)

    @staticmethod
    def _evaluate(config: RunConfig, model_path: Optional[str], data_path: Optional[str], out: Optional[str]) -> dict:
        model = ModelRepository.load_ensemble(model_path or config.model_path)
        data = _load_dataset(config, data_path)
        if model.split is not None and model.split.n_data == len(data):
            evaluated = data.subset(np.asarray(model.split.test_indices, dtype=np.int64))
            scope = "test"
        else:
            logger.warning("partição de teste ausente ou incompatível: avaliando o CSV inteiro")
            evaluated = data
            scope = "all"
        prediction, ms_per_sample = _timed_prediction(
            lambda inputs: ensemble_service.predict_batch(model, inputs), evaluated.inputs
        )
        row = BenchmarkRow(
            name=ENSEMBLE_ROW,
            report=metrics_service.report(evaluated.targets, prediction),
            predict_ms_per_sample=ms_per_sample,
        )
        table = metrics_service.benchmark_table([row])
        if out:
            _write_text(out, table.to_csv())
        return envelope(
            True,
            {"scope": scope, "report": row.report.model_dump(), "table": table.to_text()},
            f"avaliação em {len(evaluated)} amostras ({scope})",
        )

    # ===================== benchmark ===================== #

    @staticmethod
    def benchmark(
        config: RunConfig,
        data_path: Optional[str] = None,
        out: Optional[str] = None,
        out_models: Optional[str] = None,
        train_sizes: Optional[Sequence[int]] = None,
    ) -> dict:
        """Ensemble, floresta e boosting treinados e avaliados nas mesmas partições."""
        return _guarded(
            "benchmark", SurrogateController._benchmark, config, data_path, out, out_models, train_sizes
        )

    @staticmethod
    def _benchmark(
        config: RunConfig,
        data_path: Optional[str],
        out: Optional[str],
        out_models: Optional[str],
        train_sizes: Optional[Sequence[int]],
    ) -> dict:
        data = _load_dataset(config, data_path)
        train, test, split = _split(config, data)
        sizes = sorted(set(train_sizes or ()))
        for size in sizes:
            if not 0 < size <= len(train):
                raise DomainError(f"tamanho de treino {size} fora de (0, {len(train)}]")

        rows, models = _compare_models(config, train, test, split)
        table = metrics_service.benchmark_table(rows)

        accuracy = {row.name: row.report.accuracy for row in rows}
        reproduced = accuracy[ENSEMBLE_ROW] > accuracy[FOREST_ROW] > accuracy[BOOST_ROW]
        logger.info(
            "ordem ensemble > floresta > boosting por acurácia %s (%.2f%% / %.2f%% / %.2f%%)",
            "reproduzida" if reproduced else "NÃO reproduzida",
            accuracy[ENSEMBLE_ROW],
            accuracy[FOREST_ROW],
            accuracy[BOOST_ROW],
        )
        speedup = {
            row.name: FEA_SECONDS_PER_SIMULATION / (row.predict_ms_per_sample / 1000.0)
            for row in rows
            if row.predict_ms_per_sample
        }

        sweep = []
        for size in sizes:
            # a partição de treino já é uma permutação: prefixos são subconjuntos aninhados
            subset = train.subset(np.arange(size))
            sweep_rows, _ = _compare_models(config, subset, test, None)
            for row in sweep_rows:
                sweep.append({"n_train": size, "model": row.name, **row.report.model_dump()})
            rows.extend(row.model_copy(update={"name": f"{row.name} (n={size})"}) for row in sweep_rows)

        full_table = metrics_service.benchmark_table(rows)
        if out:
            _write_text(out, full_table.to_csv())
        if out_models:
            directory = Path(out_models)
            ModelRepository.save_ensemble(models[ENSEMBLE_ROW], directory / "ensemble.json")
            scaler = models[ENSEMBLE_ROW].scaler
            ModelRepository.save_tree_model(models[FOREST_ROW], directory / "random_forest.json", scaler)
            ModelRepository.save_tree_model(models[BOOST_ROW], directory / "gradient_boost.json", scaler)

        return envelope(
            True,
            {
                "table": full_table.to_text(),
                "rows": [row.model_dump() for row in table.rows],
                "ordering_reproduced": reproduced,
                "fea_speedup": speedup,
                "sweep": sweep,
            },
            f"benchmark em {len(test)} amostras de teste",
        )

    # ===================== predict ===================== #

    @staticmethod
    def predict(
        config: RunConfig,
        model_path: Optional[str] = None,
        design: Optional[Mapping[str, Any]] = None,
        designs_csv: Optional[str] = None,
        out: Optional[str] = None,
    ) -> dict:
        """Tensão do surrogate e do oráculo, com o veredito de integridade."""
        return _guarded("predict", SurrogateController._predict, config, model_path, design, designs_csv, out)

    @staticmethod
    def _predict(
        config: RunConfig,
        model_path: Optional[str],
        design: Optional[Mapping[str, Any]],
        designs_csv: Optional[str],
        out: Optional[str],
    ) -> dict:
        if (design is None) == (designs_csv is None):
            raise DomainError("informe um projeto pelas flags ou um CSV de projetos, não ambos")
        if design is not None:
            point = DesignPoint(**design)
            model = ModelRepository.load_ensemble(model_path or config.model_path)
            surrogate, spread = ensemble_service.predict_with_spread(model, point)
            oracle = physics_oracle.max_vm_stress(point, **config.water()).max_vm
            feasible = bool(physics_oracle.feasible_stress(oracle, config.material(), config.safety_factor))
            inside = config.design_space().contains(point)
            if not inside:
                logger.warning("projeto fora do espaço de projeto configurado: %s", point.model_dump())
            result = {
                "surrogate_mpa": float(surrogate[0]) / PA_PER_MPA,
                "spread_mpa": float(spread[0]) / PA_PER_MPA,
                "oracle_mpa": oracle / PA_PER_MPA,
                "feasible": feasible,
                "in_design_space": inside,
            }
            return envelope(
                True,
                result,
                f"surrogate {result['surrogate_mpa']:.3f} ± {result['spread_mpa']:.3f} MPa, "
                f"oráculo {result['oracle_mpa']:.3f} MPa, "
                f"{'íntegro' if feasible else 'FALHA'} (escoamento {config.yield_strength / PA_PER_MPA:.0f} MPa, "
                f"FS {config.safety_factor})",
            )

        designs = DatasetRepository.read_designs_csv(
            designs_csv, column_map=config.column_map, unit_factors=config.unit_factors
        )
        model = ModelRepository.load_ensemble(model_path or config.model_path)
        surrogate, spread = ensemble_service.predict_with_spread(model, designs)
        oracle = physics_oracle.max_vm_stress_batch(designs, **config.water())
        frame = pd.DataFrame(designs, columns=list(DESIGN_COLUMNS))
        frame["surrogate_mpa"] = surrogate / PA_PER_MPA
        frame["spread_mpa"] = spread / PA_PER_MPA
        frame["oracle_mpa"] = oracle / PA_PER_MPA
        frame["feasible"] = physics_oracle.feasible_stress(oracle, config.material(), config.safety_factor)
        frame = frame[list(PREDICTION_COLUMNS)]
        if out:
            DatasetRepository.write_predictions_csv(frame, out)
        return envelope(
            True,
            {"n": len(frame), "path": out, "predictions": frame.to_dict(orient="records")},
            f"{len(frame)} projetos avaliados" + (f", gravados em {out}" if out else ""),
        )


# ===================== Funções auxiliares ===================== #

def _write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _compare_models(
    config: RunConfig, train: Dataset, test: Dataset, split: Optional[SplitRecord]
) -> tuple[list[BenchmarkRow], dict[str, Any]]:
    """Treina os três modelos no mesmo `train` e mede-os no mesmo `test`."""
    rows: list[BenchmarkRow] = []
    models: dict[str, Any] = {}

    start = time.perf_counter()
    ensemble = _train_ensemble(config, train, split)
    ensemble_seconds = time.perf_counter() - start
    prediction, ms = _timed_prediction(lambda x: ensemble_service.predict_batch(ensemble, x), test.inputs)
    rows.append(
        BenchmarkRow(
            name=ENSEMBLE_ROW,
            report=metrics_service.report(test.targets, prediction),
            train_seconds=ensemble_seconds,
            predict_ms_per_sample=ms,
        )
    )
    models[ENSEMBLE_ROW] = ensemble

    # Árvores recebem as mesmas entradas normalizadas; alvos ficam em Pa
    scaler = ensemble.scaler
    scaled_train = Dataset(scaler.apply(train.inputs), train.targets, Provenance.NORMALIZED)
    scaled_test_inputs = scaler.apply(test.inputs)
    grid_seed = derive_seed(config.seed, "grid")
    for name, family, grid, seed_label in (
        (FOREST_ROW, TreeFamily.RANDOM_FOREST, config.forest_grid(), "forest"),
        (BOOST_ROW, TreeFamily.GRADIENT_BOOST, config.boost_grid(), "boost"),
    ):
        best, _ = tree_baselines.grid_search(
            scaled_train, grid, config.grid_folds, grid_seed, family=family, jobs=config.jobs
        )
        logger.info("%s: melhor célula %s", name, best.model_dump())
        start = time.perf_counter()
        model = tree_baselines.fit_family(
            family, scaled_train, best, derive_seed(config.seed, seed_label), jobs=config.jobs
        )
        train_seconds = time.perf_counter() - start
        prediction, ms = _timed_prediction(lambda x: tree_baselines.predict_model(model, x), scaled_test_inputs)
        rows.append(
            BenchmarkRow(
                name=name,
                report=metrics_service.report(test.targets, prediction),
                train_seconds=train_seconds,
                predict_ms_per_sample=ms,
            )
        )
        models[name] = model
    return rows, models
