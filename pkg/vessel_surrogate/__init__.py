"""
VesselSurrogate - substituto por aprendizado para a análise de tensões
de vasos de pressão submarinos.
"""

__version__ = "1.0.0"
