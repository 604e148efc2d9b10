"""Model fitting for the reduced-reference payload.

Generalized Gaussian parameters by maximum likelihood, Gaussian
parameters and higher moments for normalized coefficients, and
per-block Gaussian-conditional entropies for the entropic-difference
measure. The FeatureSet container and its JSON wire format live here
as well.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import psi

from .colorspace import ColorSpace
from .errors import DegenerateInput, SubbandTooSmall, TooFewSamples

BETA_MIN = 0.05
BETA_MAX = 10.0
VARIANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class GgdParams:
    """Scale/shape of a generalized Gaussian; `clamped` flags a fit that
    hit the shape bounds (a fit-quality warning, not an error)."""

    alpha: float
    beta: float
    clamped: bool = False

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")


@dataclass(frozen=True)
class GaussianParams:
    mean: float
    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True)
class SubbandMoments:
    std: float
    kurtosis: float
    skewness: float

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("std must be nonnegative")


@dataclass(frozen=True)
class BlockEntropySet:
    block_size: int
    entropies: tuple  # nats, one per full block

    def __post_init__(self):
        if not all(np.isfinite(self.entropies)):
            raise ValueError("entropies must be finite")


def _ggd_score(beta: float, log_abs: np.ndarray) -> float:
    """Profile-likelihood equation for the GGD shape; root is the MLE."""
    powered = np.exp(beta * log_abs)
    mean_pow = powered.mean()
    weighted = (powered * log_abs).mean()
    return (
        1.0
        + psi(1.0 / beta) / beta
        - weighted / mean_pow
        + np.log(beta * mean_pow) / beta
    )


def fit_ggd(coeffs: np.ndarray) -> GgdParams:
    """Maximum-likelihood GGD fit of a flat coefficient sample.

    The shape is found by root bracketing on [BETA_MIN, BETA_MAX]; when
    the likelihood equation has no root in the bracket the nearest bound
    is returned with clamped=True.
    """
    sample = np.asarray(coeffs, dtype=np.float64).ravel()
    if sample.size < 64:
        raise TooFewSamples(f"need >= 64 samples, got {sample.size}")
    if sample.var() < VARIANCE_FLOOR:
        raise DegenerateInput("sample has (near-)zero variance")

    abs_x = np.abs(sample)
    # exact zeros carry no shape information and break log; nudge them
    tiny = max(abs_x[abs_x > 0].min() * 1e-6, 1e-300)
    log_abs = np.log(np.maximum(abs_x, tiny))

    lo, hi = _ggd_score(BETA_MIN, log_abs), _ggd_score(BETA_MAX, log_abs)
    if lo * hi > 0:
        beta = BETA_MIN if abs(lo) < abs(hi) else BETA_MAX
        clamped = True
    else:
        beta = brentq(_ggd_score, BETA_MIN, BETA_MAX, args=(log_abs,), xtol=1e-8)
        clamped = False
    alpha = float((beta * np.exp(beta * log_abs).mean()) ** (1.0 / beta))
    return GgdParams(alpha=alpha, beta=float(beta), clamped=clamped)


def fit_gaussian(coeffs: np.ndarray) -> GaussianParams:
    """Sample mean and population standard deviation."""
    sample = np.asarray(coeffs, dtype=np.float64).ravel()
    if sample.size < 16:
        raise TooFewSamples(f"need >= 16 samples, got {sample.size}")
    return GaussianParams(mean=float(sample.mean()), sigma=float(sample.std()))


def moments(coeffs: np.ndarray) -> SubbandMoments:
    """Population std plus standardized third and fourth central moments."""
    sample = np.asarray(coeffs, dtype=np.float64).ravel()
    if sample.size < 16:
        raise TooFewSamples(f"need >= 16 samples, got {sample.size}")
    centered = sample - sample.mean()
    m2 = np.mean(centered**2)
    if m2 < VARIANCE_FLOOR:
        raise DegenerateInput("variance too small for skewness/kurtosis")
    m3 = np.mean(centered**3)
    m4 = np.mean(centered**4)
    return SubbandMoments(
        std=float(np.sqrt(m2)),
        kurtosis=float(m4 / m2**2),
        skewness=float(m3 / m2**1.5),
    )


def block_entropies(
    coefficients: np.ndarray,
    block_size: int,
    noise_variance_factor: float = 0.1,
) -> BlockEntropySet:
    """Per-block Gaussian-conditional entropies under a noise-stabilized
    scale-mixture model.

    The subband is tiled into non-overlapping block_size^2 blocks (edge
    remainders dropped); each block contributes
    (n/2) ln(2 pi e (var_block + var_noise)) nats, with the stabilizer
    var_noise = noise_variance_factor * Var(subband), floored at 1e-6.
    """
    arr = np.asarray(coefficients, dtype=np.float64)
    h, w = arr.shape
    if h < block_size or w < block_size:
        raise SubbandTooSmall(f"{h}x{w} subband smaller than {block_size}x{block_size} block")
    rows, cols = h // block_size, w // block_size
    trimmed = arr[: rows * block_size, : cols * block_size]
    blocks = trimmed.reshape(rows, block_size, cols, block_size).swapaxes(1, 2)
    block_var = blocks.reshape(rows, cols, -1).var(axis=2)
    noise_var = max(noise_variance_factor * arr.var(), 1e-6)
    n = block_size * block_size
    ent = 0.5 * n * np.log(2.0 * np.pi * np.e * (block_var + noise_var))
    return BlockEntropySet(block_size=block_size, entropies=tuple(ent.ravel()))


class Measure(enum.Enum):
    WNISM = "wnism"
    DNT = "dnt"
    EMISM = "emism"
    RRED = "rred"


@dataclass(frozen=True)
class ChannelFeatures:
    """Per-subband parameter records for one color channel.

    Each record is a GgdParams, a (GaussianParams, SubbandMoments) pair,
    a BlockEntropySet, or None for a degenerate (flat) subband.
    """

    name: str
    records: tuple


@dataclass(frozen=True)
class FeatureSet:
    """The reduced-reference payload transmitted from sender to receiver."""

    measure: Measure
    space: ColorSpace
    per_channel: tuple  # of ChannelFeatures
    config: dict  # measure-config snapshot (plain JSON-serializable dict)

    @property
    def config_hash(self) -> str:
        return config_digest(self.config)


def config_digest(config: dict) -> str:
    return hashlib.sha256(
        json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()[:16]


def _record_to_json(record):
    if record is None:
        return {"type": "degenerate"}
    if isinstance(record, GgdParams):
        return {
            "type": "ggd",
            "alpha": record.alpha,
            "beta": record.beta,
            "clamped": record.clamped,
        }
    if isinstance(record, BlockEntropySet):
        return {
            "type": "entropies",
            "block_size": record.block_size,
            "entropies": list(record.entropies),
        }
    gauss, mom = record
    return {
        "type": "gaussian",
        "mean": gauss.mean,
        "sigma": gauss.sigma,
        "std": None if mom is None else mom.std,
        "kurtosis": None if mom is None else mom.kurtosis,
        "skewness": None if mom is None else mom.skewness,
    }


def _record_from_json(doc):
    kind = doc["type"]
    if kind == "degenerate":
        return None
    if kind == "ggd":
        return GgdParams(doc["alpha"], doc["beta"], doc.get("clamped", False))
    if kind == "entropies":
        return BlockEntropySet(doc["block_size"], tuple(doc["entropies"]))
    if kind == "gaussian":
        mom = None
        if doc["std"] is not None:
            mom = SubbandMoments(doc["std"], doc["kurtosis"], doc["skewness"])
        return (GaussianParams(doc["mean"], doc["sigma"]), mom)
    raise ValueError(f"unknown record type {kind!r}")


def features_to_json(features: FeatureSet) -> str:
    """Serialize the RR payload. Floats keep full round-trip precision."""
    doc = {
        "measure": features.measure.value,
        "space": features.space.value,
        "config": features.config,
        "config_hash": features.config_hash,
        "channels": [
            {"name": ch.name, "subbands": [_record_to_json(r) for r in ch.records]}
            for ch in features.per_channel
        ],
    }
    return json.dumps(doc, indent=2)


def features_from_json(text: str) -> FeatureSet:
    doc = json.loads(text)
    channels = tuple(
        ChannelFeatures(
            name=ch["name"],
            records=tuple(_record_from_json(r) for r in ch["subbands"]),
        )
        for ch in doc["channels"]
    )
    return FeatureSet(
        measure=Measure(doc["measure"]),
        space=ColorSpace(doc["space"]),
        per_channel=channels,
        config=doc["config"],
    )
