"""Evolutionary composition of two images guided by region covariance descriptors."""

from .config import PRESETS, RunConfig, apply_preset, parse_config
from .evolution import GaConfig, run_ga
from .features import FEATURE_SETS, feature_tensor, resolve_spec
from .fitness import FitnessContext, Individual, make_context
from .image import load_png, save_png
from .regions import build_grid
from .saliency import image_signature_saliency, saliency_weights, uniform_weights

__version__ = "0.1.0"

__all__ = [
    "FEATURE_SETS",
    "FitnessContext",
    "GaConfig",
    "Individual",
    "PRESETS",
    "RunConfig",
    "apply_preset",
    "build_grid",
    "feature_tensor",
    "image_signature_saliency",
    "load_png",
    "make_context",
    "parse_config",
    "resolve_spec",
    "run_ga",
    "saliency_weights",
    "save_png",
    "uniform_weights",
    "__version__",
]
