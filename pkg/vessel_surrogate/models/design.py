"""
Tipos de domínio do vaso de pressão - VesselSurrogate
Ponto de projeto, material, resultado de tensão e espaço de projeto.
Unidades SI em todos os campos (metros, pascals).
"""

from __future__ import annotations

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

# Ordem das colunas em toda matriz de entrada (X)
DESIGN_VARIABLES: tuple[str, ...] = ("depth", "length", "thickness", "radius")


class DesignPoint(BaseModel):
    """Um vaso candidato: profundidade + três parâmetros geométricos."""

    model_config = ConfigDict(frozen=True)

    depth: float = Field(ge=0, allow_inf_nan=False, description="D_sea, metros de água do mar")
    length: float = Field(ge=0, allow_inf_nan=False, description="L_v, comprimento do cilindro (m)")
    thickness: float = Field(gt=0, allow_inf_nan=False, description="Th_v, espessura da parede (m)")
    radius: float = Field(gt=0, allow_inf_nan=False, description="R_end, raio externo (m)")

    @model_validator(mode="after")
    def _inner_radius_positive(self) -> "DesignPoint":
        if self.thickness >= self.radius:
            raise ValueError(
                f"thickness ({self.thickness}) deve ser menor que radius ({self.radius}): "
                "raio interno a = R - t precisa ser positivo"
            )
        return self

    def as_vector(self) -> np.ndarray:
        return np.array([self.depth, self.length, self.thickness, self.radius], dtype=np.float64)

    @classmethod
    def from_vector(cls, values) -> "DesignPoint":
        depth, length, thickness, radius = (float(v) for v in values)
        return cls(depth=depth, length=length, thickness=thickness, radius=radius)


class Material(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    yield_strength: float = Field(gt=0, allow_inf_nan=False, description="Pa")
    density: float = Field(default=2700.0, gt=0, description="kg/m³, apenas informativo")


# Valor de manual (276 MPa)
AL6061_T6 = Material(name="Al6061-T6", yield_strength=2.76e8, density=2700.0)


class StressResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    pressure: float = Field(ge=0)
    cylinder_vm: float = Field(ge=0)
    sphere_vm: float = Field(ge=0)
    max_vm: float = Field(ge=0)

    @model_validator(mode="after")
    def _max_is_governing(self) -> "StressResult":
        if self.max_vm != max(self.cylinder_vm, self.sphere_vm):
            raise ValueError("max_vm deve ser max(cylinder_vm, sphere_vm)")
        return self

    @property
    def governing(self) -> str:
        return "cylinder" if self.cylinder_vm >= self.sphere_vm else "sphere"


class SamplingMethod(str, Enum):
    UNIFORM = "uniform"
    LATIN_HYPERCUBE = "latin_hypercube"


class Bounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float = Field(allow_inf_nan=False)
    upper: float = Field(allow_inf_nan=False)

    @model_validator(mode="after")
    def _ordered(self) -> "Bounds":
        if self.lower > self.upper:
            raise ValueError(f"limite inferior {self.lower} maior que o superior {self.upper}")
        return self


class DesignSpace(BaseModel):
    """Região limitada do R^4 onde os projetos são amostrados."""

    model_config = ConfigDict(frozen=True)

    depth: Bounds = Bounds(lower=100.0, upper=6000.0)
    length: Bounds = Bounds(lower=0.1, upper=2.0)
    thickness: Bounds = Bounds(lower=0.002, upper=0.06)
    radius: Bounds = Bounds(lower=0.05, upper=0.5)

    @model_validator(mode="after")
    def _physically_meaningful(self) -> "DesignSpace":
        if self.depth.lower < 0 or self.length.lower < 0:
            raise ValueError("depth e length não podem ser negativos")
        if self.thickness.lower <= 0 or self.radius.lower <= 0:
            raise ValueError("thickness e radius precisam ser positivos")
        if self.thickness.lower >= self.radius.upper:
            raise ValueError("nenhuma geometria viável: thickness.lower >= radius.upper")
        return self

    def lower(self) -> np.ndarray:
        return np.array([getattr(self, name).lower for name in DESIGN_VARIABLES])

    def upper(self) -> np.ndarray:
        return np.array([getattr(self, name).upper for name in DESIGN_VARIABLES])

    def contains(self, design: DesignPoint) -> bool:
        vector = design.as_vector()
        return bool(np.all(vector >= self.lower()) and np.all(vector <= self.upper()))
