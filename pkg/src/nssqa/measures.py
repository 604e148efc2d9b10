"""The four reduced-reference measures and the color aggregation rule.

Sender-side extract_features() builds the compact payload; receiver-side
score() consumes that payload plus the distorted image only, honoring
the reduced-reference architecture.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import decompose
from .colorspace import ColorSpace, convert
from .decompose import BandKind, DecompositionConfig
from .divergence import (
    DistanceKind,
    SubbandDistance,
    dnt_distance,
    entropy_diff,
    kld_ggd,
)
from .errors import ConfigMismatch, DegenerateInput
from .image import RgbImage, crop_rgb
from .statmodel import (
    ChannelFeatures,
    FeatureSet,
    GaussianParams,
    GgdParams,
    Measure,
    SubbandMoments,
    block_entropies,
    fit_gaussian,
    fit_ggd,
    moments,
)

# Stand-ins for degenerate (flat) subbands so a constant channel cannot
# poison the pooled sum.
_NEAR_ZERO_GGD = GgdParams(alpha=1e-6, beta=2.0)
_NEAR_ZERO_GAUSS = GaussianParams(mean=0.0, sigma=1e-6)
_ZERO_MOMENTS = SubbandMoments(std=0.0, kurtosis=0.0, skewness=0.0)


@dataclass(frozen=True)
class MeasureConfig:
    measure: Measure
    space: ColorSpace
    d0: float = 0.1
    decomposition: DecompositionConfig = field(default_factory=DecompositionConfig)
    dnt_weights: tuple = (1.0, 1.0, 1.0, 1.0)
    rred_block_size: int = 3
    rred_noise_factor: float = 0.1
    rred_all_subbands: bool = False
    rred_signed: bool = False
    emism_include_residue: bool = False
    channel_weights: tuple | None = None

    def __post_init__(self):
        if self.d0 <= 0:
            raise ValueError("d0 must be positive")

    def snapshot(self) -> dict:
        """Plain-dict view used for payload compatibility checks."""
        dec = self.decomposition
        return {
            "measure": self.measure.value,
            "space": self.space.value,
            "d0": self.d0,
            "scales": dec.scales,
            "orientations": dec.orientations,
            "imf_count": dec.imf_count,
            "sift_max_iters": dec.sift_max_iters,
            "sift_sd_threshold": dec.sift_sd_threshold,
            "dnt_weights": list(self.dnt_weights),
            "rred_block_size": self.rred_block_size,
            "rred_noise_factor": self.rred_noise_factor,
            "rred_all_subbands": self.rred_all_subbands,
            "rred_signed": self.rred_signed,
            "emism_include_residue": self.emism_include_residue,
            "channel_weights": (
                None if self.channel_weights is None else list(self.channel_weights)
            ),
        }


def config_from_snapshot(doc: dict) -> MeasureConfig:
    """Rebuild a MeasureConfig from a payload's config snapshot."""
    return MeasureConfig(
        measure=Measure(doc["measure"]),
        space=ColorSpace(doc["space"]),
        d0=doc["d0"],
        decomposition=DecompositionConfig(
            scales=doc["scales"],
            orientations=doc["orientations"],
            imf_count=doc["imf_count"],
            sift_max_iters=doc["sift_max_iters"],
            sift_sd_threshold=doc["sift_sd_threshold"],
        ),
        dnt_weights=tuple(doc["dnt_weights"]),
        rred_block_size=doc["rred_block_size"],
        rred_noise_factor=doc["rred_noise_factor"],
        rred_all_subbands=doc["rred_all_subbands"],
        rred_signed=doc["rred_signed"],
        emism_include_residue=doc["emism_include_residue"],
        channel_weights=(
            None if doc["channel_weights"] is None else tuple(doc["channel_weights"])
        ),
    )


@dataclass(frozen=True)
class DistortionScore:
    total: float
    per_channel: tuple  # of (channel name, score)
    per_subband: tuple  # of (channel name, subband label, SubbandDistance)

    def to_json_dict(self) -> dict:
        return {
            "total": self.total,
            "per_channel": [{"channel": n, "score": s} for n, s in self.per_channel],
            "per_subband": [
                {"channel": c, "subband": lbl, "kind": d.kind.value, "value": d.value}
                for c, lbl, d in self.per_subband
            ],
        }


def _feature_bands(config: MeasureConfig, plane):
    """Decompose one plane and return the labeled feature subbands."""
    dec = config.decomposition
    measure = config.measure
    if measure is Measure.WNISM:
        bands = decompose.steerable_pyramid(plane, dec).of_kind(BandKind.ORIENTED)
    elif measure is Measure.DNT:
        bands = decompose.dnt(plane, dec).of_kind(BandKind.DETAIL)
    elif measure is Measure.EMISM:
        kinds = (BandKind.IMF, BandKind.RESIDUE) if config.emism_include_residue else (BandKind.IMF,)
        bands = decompose.bemd(plane, dec).of_kind(*kinds)
    else:  # RRED
        details = decompose.wavelet(plane, dec).of_kind(BandKind.DETAIL)
        if config.rred_all_subbands:
            bands = details
        else:
            # finest-scale horizontal detail
            bands = tuple(b for b in details if b.scale == 0 and b.orientation == 0)
    return bands


def _fit_record(config: MeasureConfig, band):
    """Fit the measure-appropriate model; None marks a degenerate subband."""
    coeffs = band.coefficients
    measure = config.measure
    try:
        if measure in (Measure.WNISM, Measure.EMISM):
            return fit_ggd(coeffs.ravel())
        if measure is Measure.DNT:
            gauss = fit_gaussian(coeffs.ravel())
            return gauss, moments(coeffs.ravel())
        return block_entropies(
            coeffs, config.rred_block_size, config.rred_noise_factor
        )
    except DegenerateInput:
        return None


def _crop_factor(config: MeasureConfig) -> int:
    # BEMD runs at full resolution and needs no divisibility
    if config.measure is Measure.EMISM:
        return 1
    return 2**config.decomposition.scales


def extract_features(img: RgbImage, config: MeasureConfig) -> FeatureSet:
    """Sender side: convert, decompose and fit each channel."""
    img = crop_rgb(img, _crop_factor(config))
    stack = convert(img, config.space)
    channels = []
    for name, plane in stack.channels:
        bands = _feature_bands(config, plane)
        records = tuple(_fit_record(config, b) for b in bands)
        channels.append(ChannelFeatures(name=name, records=records))
    return FeatureSet(
        measure=config.measure,
        space=config.space,
        per_channel=tuple(channels),
        config=config.snapshot(),
    )


def _ggd_pair_distance(ref, dst) -> SubbandDistance:
    if ref is None and dst is None:
        return SubbandDistance(0.0, DistanceKind.KLD_GGD)
    if dst is None:
        return kld_ggd(ref, _NEAR_ZERO_GGD)
    if ref is None:
        return kld_ggd(dst, _NEAR_ZERO_GGD)
    return kld_ggd(ref, dst)


def _dnt_pair_distance(ref, dst, weights) -> SubbandDistance:
    if ref is None and dst is None:
        return SubbandDistance(0.0, DistanceKind.MOMENT_DIFF)
    ref = ref if ref is not None else (_NEAR_ZERO_GAUSS, _ZERO_MOMENTS)
    dst = dst if dst is not None else (_NEAR_ZERO_GAUSS, _ZERO_MOMENTS)
    ref_gauss, ref_mom = ref
    dst_gauss, dst_mom = dst
    if ref_gauss.sigma < 1e-12:
        ref_gauss = _NEAR_ZERO_GAUSS
    if dst_gauss.sigma < 1e-12:
        dst_gauss = _NEAR_ZERO_GAUSS
    ref_mom = ref_mom if ref_mom is not None else _ZERO_MOMENTS
    dst_mom = dst_mom if dst_mom is not None else _ZERO_MOMENTS
    return dnt_distance((ref_gauss, ref_mom), (dst_gauss, dst_mom), weights)


def _channel_score(config: MeasureConfig, distances) -> float:
    values = [d.value for d in distances]
    measure = config.measure
    if measure in (Measure.WNISM, Measure.EMISM):
        return float(np.log2(1.0 + sum(values) / config.d0))
    if measure is Measure.DNT:
        return float(sum(values))
    # RRED: per-subband entropy differences, summed; abs keeps the
    # signed variant a valid (nonnegative) distortion score
    return float(abs(sum(values)) if config.rred_signed else sum(values))


def score(ref_features: FeatureSet, dst_img: RgbImage, config: MeasureConfig) -> DistortionScore:
    """Receiver side: score a distorted image against the RR payload."""
    expected = config.snapshot()
    if ref_features.config != expected:
        raise ConfigMismatch(
            "reference features were extracted under a different configuration"
        )
    dst_features = extract_features(dst_img, config)
    if len(dst_features.per_channel) != len(ref_features.per_channel):
        raise ConfigMismatch("channel count mismatch")

    weights = config.channel_weights or (1.0,) * len(ref_features.per_channel)
    per_channel = []
    per_subband = []
    for w, ref_ch, dst_ch in zip(weights, ref_features.per_channel, dst_features.per_channel):
        if len(ref_ch.records) != len(dst_ch.records):
            raise ConfigMismatch(f"subband count mismatch in channel {ref_ch.name}")
        distances = []
        for i, (ref_rec, dst_rec) in enumerate(zip(ref_ch.records, dst_ch.records)):
            if config.measure in (Measure.WNISM, Measure.EMISM):
                dist = _ggd_pair_distance(ref_rec, dst_rec)
            elif config.measure is Measure.DNT:
                dist = _dnt_pair_distance(ref_rec, dst_rec, config.dnt_weights)
            else:
                dist = entropy_diff(ref_rec, dst_rec, signed=config.rred_signed)
            distances.append(dist)
            per_subband.append((ref_ch.name, f"band{i}", dist))
        per_channel.append((ref_ch.name, w * _channel_score(config, distances)))
    total = float(sum(s for _, s in per_channel))
    return DistortionScore(
        total=total, per_channel=tuple(per_channel), per_subband=tuple(per_subband)
    )


def score_pair(ref_img: RgbImage, dst_img: RgbImage, config: MeasureConfig) -> DistortionScore:
    """Convenience wrapper: extract from the reference, then score."""
    return score(extract_features(ref_img, config), dst_img, config)
