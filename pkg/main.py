#!/usr/bin/env python3
"""
VesselSurrogate - linha de comando
Launcher principal: `python main.py <subcomando> [flags]`
"""

import os
import sys

# Adiciona o diretório atual ao path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from vessel_surrogate.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
