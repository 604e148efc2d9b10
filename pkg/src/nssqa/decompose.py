"""Multi-scale decompositions behind a common subband container.

Four transforms feed the four quality measures: the steerable pyramid,
an orthogonal wavelet, the wavelet followed by divisive normalization,
and bidimensional empirical mode decomposition.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import bemd as _bemd
from . import dnt as _dnt
from . import pyramid as _pyramid
from . import wavelet as _wavelet
from .image import ImagePlane


class TransformKind(enum.Enum):
    STEERABLE_PYRAMID = "steerable_pyramid"
    WAVELET_DNT = "wavelet_dnt"
    BEMD = "bemd"
    WAVELET = "wavelet"


class BandKind(enum.Enum):
    ORIENTED = "oriented"
    HIGHPASS = "highpass"
    LOWPASS = "lowpass"
    DETAIL = "detail"
    APPROX = "approx"
    IMF = "imf"
    RESIDUE = "residue"


@dataclass(frozen=True)
class DecompositionConfig:
    scales: int = 3
    orientations: int = 4
    imf_count: int = 3
    sift_max_iters: int = 10
    sift_sd_threshold: float = 0.3

    def __post_init__(self):
        for name in ("scales", "orientations", "imf_count", "sift_max_iters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.sift_sd_threshold <= 0:
            raise ValueError("sift_sd_threshold must be positive")


@dataclass(frozen=True)
class Subband:
    scale: int
    orientation: int
    kind: BandKind
    coefficients: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("subband coefficients must be finite")

    @property
    def label(self) -> str:
        return f"{self.kind.value}[s={self.scale},o={self.orientation}]"


@dataclass(frozen=True)
class SubbandSet:
    transform: TransformKind
    subbands: tuple
    config: DecompositionConfig

    def of_kind(self, *kinds: BandKind) -> tuple:
        return tuple(b for b in self.subbands if b.kind in kinds)


def steerable_pyramid(plane: ImagePlane, config: DecompositionConfig) -> SubbandSet:
    """Oriented bandpass subbands plus highpass and lowpass residuals.

    The scales x orientations oriented bands are the feature bands; the
    two residuals are carried for reconstruction tests.
    """
    pyr = _pyramid.build(plane.data, config.scales, config.orientations)
    subbands = [Subband(0, 0, BandKind.HIGHPASS, pyr["highpass"])]
    for s, level in enumerate(pyr["bands"]):
        for o, coeffs in enumerate(level):
            subbands.append(Subband(s, o, BandKind.ORIENTED, coeffs))
    subbands.append(Subband(config.scales, 0, BandKind.LOWPASS, pyr["lowpass"]))
    return SubbandSet(TransformKind.STEERABLE_PYRAMID, tuple(subbands), config)


def wavelet(plane: ImagePlane, config: DecompositionConfig) -> SubbandSet:
    """Orthogonal wavelet detail subbands (3 per scale) plus approximation."""
    dec = _wavelet.forward(plane.data, config.scales)
    subbands = []
    for s, level in enumerate(dec["details"]):
        for o, coeffs in enumerate(level):
            subbands.append(Subband(s, o, BandKind.DETAIL, coeffs))
    subbands.append(Subband(config.scales, 0, BandKind.APPROX, dec["approx"]))
    return SubbandSet(TransformKind.WAVELET, tuple(subbands), config)


def dnt(plane: ImagePlane, config: DecompositionConfig) -> SubbandSet:
    """Wavelet detail subbands after divisive normalization."""
    dec = _wavelet.forward(plane.data, config.scales)
    subbands = []
    for s, level in enumerate(dec["details"]):
        for o, coeffs in enumerate(level):
            subbands.append(Subband(s, o, BandKind.DETAIL, _dnt.normalize(coeffs)))
    subbands.append(Subband(config.scales, 0, BandKind.APPROX, dec["approx"]))
    return SubbandSet(TransformKind.WAVELET_DNT, tuple(subbands), config)


def bemd(plane: ImagePlane, config: DecompositionConfig) -> SubbandSet:
    """Intrinsic mode functions plus residue, all full resolution."""
    imfs, residue = _bemd.decompose(
        plane.data,
        imf_count=config.imf_count,
        max_iters=config.sift_max_iters,
        sd_threshold=config.sift_sd_threshold,
    )
    subbands = [Subband(i, 0, BandKind.IMF, imf) for i, imf in enumerate(imfs)]
    subbands.append(Subband(config.imf_count, 0, BandKind.RESIDUE, residue))
    return SubbandSet(TransformKind.BEMD, tuple(subbands), config)


def reconstruct_pyramid(subband_set: SubbandSet) -> np.ndarray:
    """Synthesis path for the steerable pyramid (round-trip oracle)."""
    cfg = subband_set.config
    oriented = subband_set.of_kind(BandKind.ORIENTED)
    bands = [
        [next(b.coefficients for b in oriented if b.scale == s and b.orientation == o)
         for o in range(cfg.orientations)]
        for s in range(cfg.scales)
    ]
    pyr = {
        "highpass": subband_set.of_kind(BandKind.HIGHPASS)[0].coefficients,
        "bands": bands,
        "lowpass": subband_set.of_kind(BandKind.LOWPASS)[0].coefficients,
    }
    return _pyramid.reconstruct(pyr)


def reconstruct_wavelet(subband_set: SubbandSet) -> np.ndarray:
    """Synthesis path for the orthogonal wavelet (round-trip oracle)."""
    cfg = subband_set.config
    details = subband_set.of_kind(BandKind.DETAIL)
    levels = [
        tuple(next(b.coefficients for b in details if b.scale == s and b.orientation == o)
              for o in range(3))
        for s in range(cfg.scales)
    ]
    dec = {
        "approx": subband_set.of_kind(BandKind.APPROX)[0].coefficients,
        "details": levels,
    }
    return _wavelet.inverse(dec)
