"""
Oráculo físico - VesselSurrogate
Substitui a etapa de FEA por soluções fechadas de Lamé: cilindro fechado de
parede espessa e calota hemisférica sob pressão hidrostática externa.
Tensões de junção (solda cilindro/calota) são ignoradas.
"""

from __future__ import annotations

import math

import numpy as np

from ..core.errors import DomainError
from ..models.design import DesignPoint, Material, StressResult

SEAWATER_DENSITY = 1025.0  # kg/m³
GRAVITY = 9.81  # m/s²
SQRT3 = math.sqrt(3.0)


def hydrostatic_pressure(
    depth: float, *, density: float = SEAWATER_DENSITY, gravity: float = GRAVITY
) -> float:
    """Pressão manométrica ρ·g·d em Pa (interior do vaso a 1 atm)."""
    if not depth >= 0:
        raise DomainError(f"profundidade negativa: {depth}")
    return density * gravity * depth


def _check_shell(pressure: float, outer_radius: float, thickness: float) -> None:
    if not pressure >= 0:
        raise DomainError(f"pressão negativa: {pressure}")
    if not thickness > 0:
        raise DomainError(f"espessura deve ser positiva: {thickness}")
    if not thickness < outer_radius:
        raise DomainError(
            f"espessura {thickness} >= raio externo {outer_radius}: raio interno não positivo"
        )


def cylinder_max_vm(pressure: float, outer_radius: float, thickness: float) -> float:
    """
    Von Mises máximo do cilindro fechado (Lamé), na superfície interna.

    Com a = b - t e k = p·b²/(b² - a²), o estado em r = a é
    (σr, σθ, σz) = (0, -2k, -k), cujo von Mises vale √3·k.
    """
    _check_shell(pressure, outer_radius, thickness)
    b = outer_radius
    a = b - thickness
    k = pressure * b * b / (b * b - a * a)
    return SQRT3 * k


def sphere_max_vm(pressure: float, outer_radius: float, thickness: float) -> float:
    """
    Von Mises máximo da esfera espessa (calotas), na superfície interna.

    Estado (σr, σθ, σφ) = (0, -c, -c) com c = 1.5·p·b³/(b³ - a³).
    """
    _check_shell(pressure, outer_radius, thickness)
    b = outer_radius
    a = b - thickness
    return 1.5 * pressure * (b * b * b) / (b * b * b - a * a * a)


def max_vm_stress(
    design: DesignPoint, *, density: float = SEAWATER_DENSITY, gravity: float = GRAVITY
) -> StressResult:
    """Tensão governante do vaso; independe de design.length (modelo de membrana)."""
    pressure = hydrostatic_pressure(design.depth, density=density, gravity=gravity)
    cylinder = cylinder_max_vm(pressure, design.radius, design.thickness)
    sphere = sphere_max_vm(pressure, design.radius, design.thickness)
    return StressResult(
        pressure=pressure,
        cylinder_vm=cylinder,
        sphere_vm=sphere,
        max_vm=max(cylinder, sphere),
    )


def max_vm_stress_batch(
    inputs: np.ndarray, *, density: float = SEAWATER_DENSITY, gravity: float = GRAVITY
) -> np.ndarray:
    """Versão vetorizada sobre uma matriz (n, 4) já validada."""
    inputs = np.asarray(inputs, dtype=np.float64).reshape(-1, 4)
    depth, thickness, b = inputs[:, 0], inputs[:, 2], inputs[:, 3]
    if np.any(depth < 0) or np.any(thickness <= 0) or np.any(thickness >= b):
        raise DomainError("matriz de projetos contém linhas inválidas")
    pressure = density * gravity * depth
    a = b - thickness
    cylinder = SQRT3 * (pressure * b * b / (b * b - a * a))
    sphere = 1.5 * pressure * (b * b * b) / (b * b * b - a * a * a)
    return np.maximum(cylinder, sphere)


def feasible_stress(stress, material: Material, safety_factor: float = 1.0) -> np.ndarray:
    """Integridade elemento a elemento: σ_vm·FS abaixo da tensão de escoamento."""
    if not safety_factor >= 1:
        raise DomainError(f"fator de segurança deve ser >= 1: {safety_factor}")
    return np.asarray(stress, dtype=np.float64) * safety_factor < material.yield_strength


def is_feasible(design: DesignPoint, material: Material, safety_factor: float = 1.0, **water) -> bool:
    return bool(feasible_stress(max_vm_stress(design, **water).max_vm, material, safety_factor))
