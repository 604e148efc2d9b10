"""Reduced-reference image quality assessment from natural scene
statistics: WNISM, DNT, EMISM and RRED measures with grayscale, RGB and
CIELAB variants, plus the subjective-correlation evaluation protocol.
"""

from .colorspace import ColorSpace
from .decompose import DecompositionConfig
from .image import RgbImage, load_image
from .measures import MeasureConfig, extract_features, score, score_pair
from .statmodel import FeatureSet, Measure, features_from_json, features_to_json

__all__ = [
    "ColorSpace",
    "DecompositionConfig",
    "RgbImage",
    "load_image",
    "MeasureConfig",
    "extract_features",
    "score",
    "score_pair",
    "FeatureSet",
    "Measure",
    "features_from_json",
    "features_to_json",
]
