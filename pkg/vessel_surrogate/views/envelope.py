"""Envelope de resposta dos controllers: {"success", "data", "message"}."""

from typing import Any


def envelope(sucesso: bool, dados: Any = None, mensagem: str = "") -> dict:
    return {"success": sucesso, "data": dados, "message": mensagem}


def falha(mensagem: str) -> dict:
    return envelope(False, None, mensagem)
