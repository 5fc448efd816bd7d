"""
Components package for AisPipelineService decomposition.
Provides AisCleaner, PortCallDetector, and GammaCalibrator.
"""
from services.components.ais_cleaner import AisCleaner
from services.components.gamma_calibrator import GammaCalibrator
from services.components.port_call_detector import PortCallDetector

__all__ = [
    "AisCleaner",
    "PortCallDetector",
    "GammaCalibrator",
]
