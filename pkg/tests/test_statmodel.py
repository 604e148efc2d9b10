import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nssqa.colorspace import ColorSpace
from nssqa.errors import DegenerateInput, SubbandTooSmall, TooFewSamples
from nssqa.statmodel import (
    BlockEntropySet,
    ChannelFeatures,
    FeatureSet,
    GaussianParams,
    GgdParams,
    Measure,
    SubbandMoments,
    block_entropies,
    config_digest,
    features_from_json,
    features_to_json,
    fit_gaussian,
    fit_ggd,
    moments,
)
from oracles import sample_ggd


# ------------------------------------------------------------------ fits

@pytest.mark.parametrize("beta", [0.7, 1.0, 2.0, 3.0])
def test_fit_ggd_recovers_parameters(beta):
    rng = np.random.default_rng(999)
    sample = sample_ggd(1.5, beta, 200_000, rng)
    fit = fit_ggd(sample)
    assert not fit.clamped
    assert abs(fit.alpha - 1.5) / 1.5 < 0.05
    assert abs(fit.beta - beta) / beta < 0.05


def test_fit_ggd_gaussian_sample_gives_beta_two(rng):
    fit = fit_ggd(rng.normal(0.0, 2.0, 100_000))
    assert abs(fit.beta - 2.0) < 0.1
    # for beta = 2 the GGD scale is sqrt(2) * sigma
    assert abs(fit.alpha - 2.0 * np.sqrt(2.0)) < 0.1


def test_fit_ggd_input_validation(rng):
    with pytest.raises(TooFewSamples):
        fit_ggd(rng.normal(size=63))
    with pytest.raises(DegenerateInput):
        fit_ggd(np.full(100, 3.0))


def test_fit_ggd_survives_exact_zeros(rng):
    sample = rng.normal(size=10_000)
    sample[::7] = 0.0
    fit = fit_ggd(sample)
    assert np.isfinite(fit.alpha) and np.isfinite(fit.beta)


def test_ggd_params_validation():
    with pytest.raises(ValueError):
        GgdParams(alpha=-1.0, beta=2.0)
    with pytest.raises(ValueError):
        GgdParams(alpha=1.0, beta=0.0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=16, max_size=200))
def test_fit_gaussian_matches_numpy(values):
    sample = np.asarray(values)
    fit = fit_gaussian(sample)
    assert fit.mean == pytest.approx(float(sample.mean()), abs=1e-12)
    assert fit.sigma == pytest.approx(float(sample.std()), abs=1e-12)


def test_moments_known_values(rng):
    sample = rng.normal(0.0, 3.0, 500_000)
    m = moments(sample)
    assert m.std == pytest.approx(3.0, rel=0.02)
    assert m.kurtosis == pytest.approx(3.0, rel=0.05)
    assert abs(m.skewness) < 0.05
    with pytest.raises(TooFewSamples):
        moments(sample[:8])
    with pytest.raises(DegenerateInput):
        moments(np.full(100, 2.0))


# -------------------------------------------------------- block entropy

def test_block_entropies_constant_subband():
    """Flat blocks reduce to the noise-floor entropy, computable by hand."""
    arr = np.full((6, 6), 9.0)
    out = block_entropies(arr, block_size=3, noise_variance_factor=0.1)
    assert len(out.entropies) == 4
    expected = 0.5 * 9 * np.log(2.0 * np.pi * np.e * 1e-6)
    assert np.allclose(out.entropies, expected)


def test_block_entropies_hand_computed():
    arr = np.zeros((3, 6))
    arr[:, 3:] = np.arange(9).reshape(3, 3)
    out = block_entropies(arr, block_size=3, noise_variance_factor=0.1)
    noise = 0.1 * arr.var()
    left = 0.5 * 9 * np.log(2 * np.pi * np.e * (0.0 + noise))
    right = 0.5 * 9 * np.log(2 * np.pi * np.e * (np.arange(9).var() + noise))
    assert out.entropies == pytest.approx((left, right))


def test_block_entropies_drops_edge_remainders(rng):
    out = block_entropies(rng.normal(size=(7, 8)), block_size=3)
    assert len(out.entropies) == 2 * 2
    with pytest.raises(SubbandTooSmall):
        block_entropies(rng.normal(size=(2, 9)), block_size=3)


def test_block_entropy_monotone_in_block_variance(rng):
    quiet = block_entropies(0.1 * rng.normal(size=(9, 9)), block_size=3)
    loud = block_entropies(10.0 * rng.normal(size=(9, 9)), block_size=3)
    assert np.mean(loud.entropies) > np.mean(quiet.entropies)


# -------------------------------------------------------- serialization

def _sample_feature_set() -> FeatureSet:
    records = (
        GgdParams(alpha=0.5, beta=1.25, clamped=False),
        None,
        (GaussianParams(0.1, 2.0), SubbandMoments(2.0, 3.1, -0.2)),
        (GaussianParams(0.0, 1.0), None),
        BlockEntropySet(3, (1.5, -0.25, 7.0)),
    )
    return FeatureSet(
        measure=Measure.WNISM,
        space=ColorSpace.CIELAB,
        per_channel=(ChannelFeatures("L*", records),),
        config={"d0": 0.1, "scales": 3},
    )


def test_feature_set_json_round_trip():
    original = _sample_feature_set()
    back = features_from_json(features_to_json(original))
    assert back == original
    assert back.config_hash == original.config_hash


def test_feature_json_is_plain_and_precise():
    doc = json.loads(features_to_json(_sample_feature_set()))
    assert doc["measure"] == "wnism" and doc["space"] == "lab"
    kinds = [r["type"] for r in doc["channels"][0]["subbands"]]
    assert kinds == ["ggd", "degenerate", "gaussian", "gaussian", "entropies"]
    # floats survive the round trip bit-exactly
    assert doc["channels"][0]["subbands"][0]["beta"] == 1.25


def test_config_digest_is_order_insensitive():
    assert config_digest({"a": 1, "b": 2}) == config_digest({"b": 2, "a": 1})
    assert config_digest({"a": 1}) != config_digest({"a": 2})
    assert len(config_digest({})) == 16
