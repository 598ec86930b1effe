from __future__ import annotations

from contextvars import ContextVar
from pathlib import Path
from typing import Any, Optional

from pydantic import Field, ValidationError, model_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)

from ..models.design import Bounds, DesignSpace, Material, SamplingMethod
from ..models.network import Architecture, TrainConfig
from ..models.trees import SplitCriterion, TreeHyperParams
from .errors import ConfigError

# Arquivo TOML da execução corrente (definido por load_run_config)
_config_file: ContextVar[Optional[Path]] = ContextVar("config_file", default=None)


class RunConfig(BaseSettings):
    """
    Configuração plana de uma execução. Prioridade das fontes:
    flags da linha de comando > arquivo TOML > variáveis VESSEL_* > .env > padrões.
    """

    # Espaço de projeto (SI)
    depth_min: float = 100.0
    depth_max: float = 6000.0
    length_min: float = 0.1
    length_max: float = 2.0
    thickness_min: float = 0.002
    thickness_max: float = 0.06
    radius_min: float = 0.05
    radius_max: float = 0.5

    # Amostragem e partição
    n_samples: int = Field(default=11311, ge=1)
    sampling_method: str = "uniform"
    seed: int = Field(default=0, ge=0)
    n_train: int = Field(default=8000, ge=1)

    # Arquitetura e treino
    hidden_widths: list[int] = [64] * 6
    dropout_rate: float = 0.2
    dropout_after: list[int] = [2, 4]
    skip_spans: list[tuple[int, int]] = [(1, 3), (3, 5)]
    learning_rate: float = 0.001
    batch_size: int = 128
    patience: int = 50
    max_epochs: int = 2000
    val_fraction: float = Field(default=0.1, gt=0, lt=1)
    ensemble_k: int = Field(default=5, ge=1)

    # Grades dos modelos de árvore (profundidade 0 = sem limite)
    forest_max_depth: list[int] = [12, 20, 0]
    forest_n_trees: list[int] = [100]
    forest_criteria: list[str] = ["variance_reduction"]
    forest_max_features: list[int] = [4, 2]
    boost_max_depth: list[int] = [3, 5]
    boost_n_trees: list[int] = [100]
    boost_shrinkage: list[float] = [0.1]
    grid_folds: int = Field(default=3, ge=2)

    # Material e água do mar
    material_name: str = "Al6061-T6"
    yield_strength: float = 2.76e8
    material_density: float = 2700.0
    safety_factor: float = 1.0
    seawater_density: float = Field(default=1025.0, gt=0)
    gravity: float = Field(default=9.81, gt=0)

    # Execução e arquivos
    jobs: int = Field(default=1, ge=1)
    data_path: str = "data/vessel_stress.csv"
    model_path: str = "models/ensemble.json"
    column_map: dict[str, str] = {}
    unit_factors: dict[str, float] = {}
    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="VESSEL_",
        env_file=".env",
        case_sensitive=False,
        extra="forbid",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (
            init_settings,
            TomlConfigSettingsSource(settings_cls, toml_file=_config_file.get()),
            env_settings,
            dotenv_settings,
        )

    @model_validator(mode="after")
    def _validate_modules(self) -> "RunConfig":
        # Constrói cada objeto de domínio para checar suas invariantes agora
        self.design_space()
        self.architecture()
        self.train_config()
        self.material()
        self.forest_grid()
        self.boost_grid()
        SamplingMethod(self.sampling_method)
        if not self.safety_factor >= 1:
            raise ValueError("safety_factor deve ser >= 1")
        return self

    # ---------- objetos de domínio derivados ---------- #

    def design_space(self) -> DesignSpace:
        return DesignSpace(
            depth=Bounds(lower=self.depth_min, upper=self.depth_max),
            length=Bounds(lower=self.length_min, upper=self.length_max),
            thickness=Bounds(lower=self.thickness_min, upper=self.thickness_max),
            radius=Bounds(lower=self.radius_min, upper=self.radius_max),
        )

    def architecture(self) -> Architecture:
        return Architecture(
            hidden_widths=tuple(self.hidden_widths),
            dropout_rate=self.dropout_rate,
            dropout_after=tuple(self.dropout_after),
            skip_spans=tuple(tuple(span) for span in self.skip_spans),
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            max_epochs=self.max_epochs,
            batch_size=self.batch_size,
            patience=self.patience,
            seed=self.seed,
            learning_rate=self.learning_rate,
        )

    def material(self) -> Material:
        return Material(name=self.material_name, yield_strength=self.yield_strength, density=self.material_density)

    def water(self) -> dict[str, float]:
        return {"density": self.seawater_density, "gravity": self.gravity}

    def forest_grid(self) -> list[TreeHyperParams]:
        return [
            TreeHyperParams(
                max_depth=depth or None,
                criterion=SplitCriterion(criterion),
                n_trees=n_trees,
                max_features=max_features,
                bootstrap=True,
            )
            for depth in self.forest_max_depth
            for n_trees in self.forest_n_trees
            for criterion in self.forest_criteria
            for max_features in self.forest_max_features
        ]

    def boost_grid(self) -> list[TreeHyperParams]:
        return [
            TreeHyperParams(max_depth=depth or None, n_trees=n_trees, shrinkage=shrinkage, bootstrap=False)
            for depth in self.boost_max_depth
            for n_trees in self.boost_n_trees
            for shrinkage in self.boost_shrinkage
        ]


def load_run_config(path: str | Path | None = None, **overrides: Any) -> RunConfig:
    """
    Carrega e valida a configuração; flags com valor None são ignoradas.
    Qualquer violação vira ConfigError antes de qualquer efeito colateral.
    """
    config_path = Path(path) if path is not None else None
    if config_path is not None and not config_path.is_file():
        raise ConfigError(f"arquivo de configuração não encontrado: {config_path}")
    token = _config_file.set(config_path)
    try:
        return RunConfig(**{key: value for key, value in overrides.items() if value is not None})
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in error['loc']) or 'config'}: {error['msg']}" for error in exc.errors()
        )
        raise ConfigError(f"configuração inválida: {problems}") from exc
    except (ValueError, OSError) as exc:
        raise ConfigError(f"arquivo de configuração ilegível: {config_path}: {exc}") from exc
    finally:
        _config_file.reset(token)
