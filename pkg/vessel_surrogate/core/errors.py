"""
Hierarquia de exceções - VesselSurrogate
Controllers capturam SurrogateError e devolvem envelope de erro.
"""

from __future__ import annotations


class SurrogateError(Exception):
    """Erro base de todo o pacote."""


class DomainError(SurrogateError, ValueError):
    """Pré-condição de uma operação violada (profundidade negativa, t >= R...)."""


class ConfigError(SurrogateError):
    """Configuração inválida ou inconsistente."""


class DataFormatError(SurrogateError):
    """Arquivo CSV com coluna ausente, célula não numérica ou linha inválida."""


class TrainingError(SurrogateError):
    """Divergência durante o treinamento."""

    def __init__(self, message: str, *, epoch: int | None = None, member: int | None = None):
        super().__init__(message)
        self.epoch = epoch
        self.member = member


class ModelError(SurrogateError):
    """Saída não finita de um membro do ensemble."""


class ModelLoadError(SurrogateError):
    """Arquivo de modelo corrompido ou incompatível."""

    def __init__(self, message: str, *, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
