"""Frequency-domain steerable pyramid.

Self-inverting oriented filter bank built from raised-cosine radial
bands and cos^(K-1) angular windows normalized so that the squared
filter responses tile the frequency plane exactly. Analysis and
synthesis are both provided; round-tripping is exact up to FFT
round-off.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .errors import ImageTooSmall


def _polar_grids(shape):
    h, w = shape
    wy = 2.0 * np.pi * np.fft.fftfreq(h)
    wx = 2.0 * np.pi * np.fft.fftfreq(w)
    gy, gx = np.meshgrid(wy, wx, indexing="ij")
    r = np.hypot(gy, gx)
    theta = np.arctan2(gy, gx)
    # log2(r / pi); DC pushed far below every transition band
    with np.errstate(divide="ignore"):
        log_rad = np.where(r > 0, np.log2(r / np.pi), -100.0)
    return log_rad, theta


def _hi_mask(log_rad, shift=0.0):
    """Raised-cosine highpass edge: 0 below the octave, 1 above it."""
    x = np.clip(-(log_rad - shift), 0.0, 1.0)
    return np.cos(0.5 * np.pi * x)


def _lo_mask(log_rad, shift=0.0):
    """Quadrature complement of _hi_mask (hi^2 + lo^2 = 1)."""
    x = np.clip(-(log_rad - shift), 0.0, 1.0)
    return np.sin(0.5 * np.pi * x)


def _angle_masks(theta, orientations):
    """Angular windows whose squares sum to 1 for any orientation count."""
    k = orientations
    norm = np.sqrt(
        (2.0 ** (2 * (k - 1))) * factorial(k - 1) ** 2 / (k * factorial(2 * (k - 1)))
    )
    masks = []
    for b in range(k):
        ang = theta - np.pi * b / k
        masks.append(norm * np.abs(np.cos(ang)) ** (k - 1))
    return masks


def _crop_center(dft):
    """Keep the center half-band of a shifted-to-center spectrum."""
    h, w = dft.shape
    shifted = np.fft.fftshift(dft)
    cropped = shifted[h // 4 : h // 4 + h // 2, w // 4 : w // 4 + w // 2]
    return np.fft.ifftshift(cropped)


def _pad_center(dft, shape):
    h, w = shape
    padded = np.zeros(shape, dtype=complex)
    sh, sw = dft.shape
    padded[(h - sh) // 2 : (h - sh) // 2 + sh, (w - sw) // 2 : (w - sw) // 2 + sw] = (
        np.fft.fftshift(dft)
    )
    return np.fft.ifftshift(padded)


def build(plane: np.ndarray, scales: int, orientations: int):
    """Decompose into highpass + scales x orientations bands + lowpass.

    Returns a dict with keys 'highpass' (array), 'bands' (list per scale
    of lists per orientation) and 'lowpass' (array at 1/2^scales size).
    """
    h, w = plane.shape
    if h % (2**scales) or w % (2**scales):
        raise ImageTooSmall(
            f"{h}x{w} plane not divisible by 2^{scales}; crop first"
        )
    if min(h, w) // (2**scales) < 2:
        raise ImageTooSmall(f"{h}x{w} too small for {scales} scales")

    dft = np.fft.fft2(plane)
    log_rad, theta = _polar_grids(plane.shape)
    hi0 = _hi_mask(log_rad)
    highpass = np.fft.ifft2(dft * hi0).real

    current = dft * _lo_mask(log_rad)
    bands = []
    for _ in range(scales):
        log_rad, theta = _polar_grids(current.shape)
        himask = _hi_mask(log_rad, shift=-1.0)
        level = []
        for amask in _angle_masks(theta, orientations):
            level.append(np.fft.ifft2(current * himask * amask).real)
        bands.append(level)
        lomask = _lo_mask(log_rad, shift=-1.0)
        # lomask vanishes for |w| >= pi/2, so halving the band is alias-free;
        # the 1/4 preserves subsampling semantics.
        current = _crop_center(current * lomask) * 0.25
    lowpass = np.fft.ifft2(current).real
    return {"highpass": highpass, "bands": bands, "lowpass": lowpass}


def reconstruct(pyr) -> np.ndarray:
    """Invert build(); the synthesis path of the self-inverting bank."""
    scales = len(pyr["bands"])
    orientations = len(pyr["bands"][0])
    current = np.fft.fft2(pyr["lowpass"])
    for s in range(scales - 1, -1, -1):
        target_shape = pyr["bands"][s][0].shape
        log_rad, theta = _polar_grids(target_shape)
        lomask = _lo_mask(log_rad, shift=-1.0)
        current = _pad_center(current * 4.0, target_shape) * lomask
        himask = _hi_mask(log_rad, shift=-1.0)
        for amask, band in zip(_angle_masks(theta, orientations), pyr["bands"][s]):
            current = current + np.fft.fft2(band) * himask * amask
    log_rad, _ = _polar_grids(current.shape)
    current = current * _lo_mask(log_rad)
    current = current + np.fft.fft2(pyr["highpass"]) * _hi_mask(log_rad)
    return np.fft.ifft2(current).real
