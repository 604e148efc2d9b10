"""Round-trip and structural tests for the four decompositions."""

import numpy as np
import pytest

from nssqa import bemd, dnt, pyramid, wavelet
from nssqa.decompose import (
    BandKind,
    DecompositionConfig,
    Subband,
    TransformKind,
    reconstruct_pyramid,
    reconstruct_wavelet,
)
from nssqa import decompose
from nssqa.errors import ImageTooSmall
from nssqa.image import ImagePlane


def _rel_rmse(a, b):
    return np.sqrt(np.mean((a - b) ** 2)) / (np.sqrt(np.mean(a**2)) + 1e-300)


# ---------------------------------------------------------------- pyramid

def test_pyramid_round_trip(rng):
    x = rng.normal(size=(64, 96))
    pyr = pyramid.build(x, scales=3, orientations=4)
    assert _rel_rmse(x, pyramid.reconstruct(pyr)) < 1e-10


def test_pyramid_shapes_halve_per_scale(rng):
    x = rng.normal(size=(64, 64))
    pyr = pyramid.build(x, scales=3, orientations=4)
    assert pyr["highpass"].shape == (64, 64)
    for s, level in enumerate(pyr["bands"]):
        assert len(level) == 4
        for band in level:
            assert band.shape == (64 >> s, 64 >> s)
    assert pyr["lowpass"].shape == (8, 8)


def test_pyramid_is_linear(rng):
    x = rng.normal(size=(32, 32))
    y = rng.normal(size=(32, 32))
    a = pyramid.build(2.0 * x + y, scales=2, orientations=3)
    bx = pyramid.build(x, scales=2, orientations=3)
    by = pyramid.build(y, scales=2, orientations=3)
    for sa, sx, sy in zip(a["bands"][0], bx["bands"][0], by["bands"][0]):
        assert np.allclose(sa, 2.0 * sx + sy, atol=1e-10)


def test_pyramid_constant_image_has_zero_bandpass():
    pyr = pyramid.build(np.full((32, 32), 7.0), scales=2, orientations=4)
    assert np.max(np.abs(pyr["highpass"])) < 1e-10
    for level in pyr["bands"]:
        for band in level:
            assert np.max(np.abs(band)) < 1e-10
    # the DC survives in the lowpass residual
    assert np.mean(pyr["lowpass"]) == pytest.approx(7.0, rel=1e-6)


def test_pyramid_oriented_band_selectivity(rng):
    """A horizontal grating should load the horizontal orientation most."""
    yy = np.arange(64)[:, None] * np.ones((1, 64))
    grating = np.sin(2 * np.pi * yy / 8.0)
    pyr = pyramid.build(grating, scales=2, orientations=4)
    # period 8 lands at the second scale
    energies = [float(np.sum(b**2)) for b in pyr["bands"][1]]
    dominant = int(np.argmax(energies))
    assert energies[dominant] > 10 * min(energies)
    # the orthogonal orientation (2 apart in a 4-band fan) is near-silent
    assert energies[(dominant + 2) % 4] < 1e-6 * energies[dominant]


# ---------------------------------------------------------------- wavelet

def test_wavelet_perfect_reconstruction(rng):
    x = rng.normal(size=(64, 96))
    dec = wavelet.forward(x, scales=3)
    assert np.max(np.abs(wavelet.inverse(dec) - x)) < 1e-10


def test_wavelet_is_orthogonal(rng):
    """Energy is preserved exactly across the analysis transform."""
    x = rng.normal(size=(32, 32))
    dec = wavelet.forward(x, scales=2)
    total = np.sum(dec["approx"] ** 2)
    for lh, hl, hh in dec["details"]:
        total += np.sum(lh**2) + np.sum(hl**2) + np.sum(hh**2)
    assert total == pytest.approx(np.sum(x**2), rel=1e-9)


def test_wavelet_constant_image_has_zero_details():
    dec = wavelet.forward(np.full((32, 32), 3.0), scales=2)
    for level in dec["details"]:
        for band in level:
            assert np.max(np.abs(band)) < 1e-10


def test_wavelet_subband_shapes(rng):
    dec = wavelet.forward(rng.normal(size=(64, 64)), scales=3)
    for s, level in enumerate(dec["details"]):
        for band in level:
            assert band.shape == (64 >> (s + 1), 64 >> (s + 1))
    assert dec["approx"].shape == (8, 8)


# -------------------------------------------------------------------- dnt

def test_dnt_gaussianizes_heavy_tails(rng):
    """Divisive normalization pulls kurtosis toward the Gaussian value 3."""
    from oracles import sample_ggd

    band = sample_ggd(1.0, 0.6, 64 * 64, rng).reshape(64, 64)

    def kurt(a):
        c = a - a.mean()
        return np.mean(c**4) / np.mean(c**2) ** 2

    normalized = dnt.normalize(band)
    assert abs(kurt(normalized) - 3.0) < abs(kurt(band) - 3.0)
    assert np.all(np.isfinite(normalized))


def test_dnt_flat_subband_maps_to_zero():
    assert np.array_equal(dnt.normalize(np.full((8, 8), 5.0)), np.zeros((8, 8)))


def test_dnt_is_homogeneous(rng):
    """The multiplier estimate is scale free, so normalize(c*x) = c*normalize(x)."""
    band = rng.normal(size=(32, 32))
    assert np.allclose(10.0 * dnt.normalize(band), dnt.normalize(10.0 * band), atol=1e-9)


# ------------------------------------------------------------------- bemd

def test_bemd_completeness_is_exact(rng):
    x = rng.normal(size=(48, 48))
    imfs, residue = bemd.decompose(x, imf_count=2)
    assert np.max(np.abs(sum(imfs) + residue - x)) < 1e-12


def test_bemd_constant_plane():
    x = np.full((32, 32), 4.0)
    imfs, residue = bemd.decompose(x, imf_count=2)
    for imf in imfs:
        assert np.array_equal(imf, np.zeros_like(x))
    assert np.array_equal(residue, x)


def test_bemd_first_imf_captures_oscillation():
    """Fast sinusoid + slow ramp: IMF 1 should track the sinusoid."""
    yy, xx = np.mgrid[0:96, 0:96].astype(float)
    fast = np.sin(2 * np.pi * xx / 6.0) * np.sin(2 * np.pi * yy / 6.0)
    slow = 0.02 * (xx + yy)
    imfs, residue = bemd.decompose(fast + slow, imf_count=2)
    corr = np.corrcoef(imfs[0].ravel(), fast.ravel())[0, 1]
    assert corr > 0.95
    # what is left over should carry the trend, not the oscillation
    leftover = np.corrcoef((imfs[1] + residue).ravel(), slow.ravel())[0, 1]
    assert leftover > 0.9


def test_bemd_too_small():
    with pytest.raises(ImageTooSmall):
        bemd.decompose(np.zeros((4, 4)))


# --------------------------------------------------- decompose wrappers

def test_subband_container(rng):
    plane = ImagePlane(rng.normal(size=(32, 32)))
    cfg = DecompositionConfig(scales=2, orientations=3)
    sset = decompose.steerable_pyramid(plane, cfg)
    assert sset.transform is TransformKind.STEERABLE_PYRAMID
    oriented = sset.of_kind(BandKind.ORIENTED)
    assert len(oriented) == 2 * 3
    assert oriented[0].label == "oriented[s=0,o=0]"
    assert len(sset.of_kind(BandKind.HIGHPASS, BandKind.LOWPASS)) == 2


def test_reconstruct_wrappers_round_trip(rng):
    plane = ImagePlane(rng.normal(size=(64, 64)))
    cfg = DecompositionConfig(scales=2, orientations=4)
    assert _rel_rmse(plane.data, reconstruct_pyramid(decompose.steerable_pyramid(plane, cfg))) < 1e-10
    assert np.max(np.abs(reconstruct_wavelet(decompose.wavelet(plane, cfg)) - plane.data)) < 1e-10


def test_dnt_wrapper_band_kinds(rng):
    plane = ImagePlane(rng.normal(size=(32, 32)))
    cfg = DecompositionConfig(scales=2)
    sset = decompose.dnt(plane, cfg)
    assert sset.transform is TransformKind.WAVELET_DNT
    assert len(sset.of_kind(BandKind.DETAIL)) == 6
    assert len(sset.of_kind(BandKind.APPROX)) == 1


def test_bemd_wrapper_band_kinds(rng):
    plane = ImagePlane(rng.normal(size=(32, 32)))
    cfg = DecompositionConfig(imf_count=2)
    sset = decompose.bemd(plane, cfg)
    assert sset.transform is TransformKind.BEMD
    assert len(sset.of_kind(BandKind.IMF)) == 2
    residue = sset.of_kind(BandKind.RESIDUE)
    assert len(residue) == 1
    total = sum(b.coefficients for b in sset.subbands)
    assert np.max(np.abs(total - plane.data)) < 1e-12


def test_config_validation():
    with pytest.raises(ValueError):
        DecompositionConfig(scales=0)
    with pytest.raises(ValueError):
        DecompositionConfig(sift_sd_threshold=0.0)
    with pytest.raises(ValueError):
        Subband(0, 0, BandKind.IMF, np.array([[np.nan]]))
