"""Derivação de sementes por rótulo a partir da semente mestre."""

from __future__ import annotations

import hashlib


def derive_seed(master: int, label: str) -> int:
    """
    Deriva uma semente de 64 bits para o estágio `label`.

    Rótulos distintos geram fluxos independentes, então incluir um estágio
    novo não altera as sementes dos estágios existentes.
    """
    digest = hashlib.sha256(f"{master}/{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
