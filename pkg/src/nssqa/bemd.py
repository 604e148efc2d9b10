"""Bidimensional empirical mode decomposition by 2-D sifting.

Extrema come from 3x3 neighborhood comparisons; upper/lower envelopes
are thin-plate-spline interpolations over the extrema (local RBF with a
fixed neighbor count), evaluated on a coarse grid and upsampled with a
bicubic spline to keep full-size sifting affordable. Sifting stops on
the standard-deviation criterion or after a fixed iteration budget.

The residue is computed by subtraction, so IMFs + residue reproduce the
input exactly by construction.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import RBFInterpolator, RectBivariateSpline
from scipy.ndimage import maximum_filter, minimum_filter
from scipy.spatial import cKDTree

from .errors import ImageTooSmall, SiftingDiverged

# Minimum extrema of each kind for a meaningful envelope.
MIN_EXTREMA = 4
# Local thin-plate fit size and coarse evaluation stride.
ENVELOPE_NEIGHBORS = 16
ENVELOPE_STRIDE = 8


def _extrema(surface: np.ndarray):
    """Strict 3x3 local maxima and minima (plateaus excluded)."""
    maxf = maximum_filter(surface, size=3, mode="nearest")
    minf = minimum_filter(surface, size=3, mode="nearest")
    is_max = (surface == maxf) & (surface > minf)
    is_min = (surface == minf) & (surface < maxf)
    return np.argwhere(is_max), np.argwhere(is_min)


def _boundary_points(shape, stride):
    """Frame of support points so the envelope never extrapolates far."""
    h, w = shape
    ys = np.unique(np.r_[np.arange(0, h, stride), h - 1])
    xs = np.unique(np.r_[np.arange(0, w, stride), w - 1])
    top = np.column_stack([np.zeros_like(xs), xs])
    bottom = np.column_stack([np.full_like(xs, h - 1), xs])
    left = np.column_stack([ys, np.zeros_like(ys)])
    right = np.column_stack([ys, np.full_like(ys, w - 1)])
    return np.unique(np.vstack([top, bottom, left, right]), axis=0)


def _envelope(surface: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Thin-plate envelope through `points` (extrema row/col indices)."""
    h, w = surface.shape
    values = surface[points[:, 0], points[:, 1]]

    # pad the support with boundary points carrying the nearest extremum
    # value; drop frame points that already are extrema (duplicate centers
    # would make the interpolation system singular)
    frame = _boundary_points(surface.shape, 4 * ENVELOPE_STRIDE)
    occupied = np.zeros(surface.shape, dtype=bool)
    occupied[points[:, 0], points[:, 1]] = True
    frame = frame[~occupied[frame[:, 0], frame[:, 1]]]
    tree = cKDTree(points)
    _, nearest = tree.query(frame)
    centers = np.vstack([points, frame]).astype(float)
    heights = np.concatenate([values, values[nearest]])

    # deterministic micro-jitter keeps local neighborhoods off exact grid
    # lines (collinear centers make the thin-plate system singular)
    jitter = np.random.default_rng(1234).uniform(-1e-4, 1e-4, size=centers.shape)
    neighbors = min(ENVELOPE_NEIGHBORS, len(centers))
    rbf = RBFInterpolator(
        centers + jitter, heights, kernel="thin_plate_spline", neighbors=neighbors
    )

    ny = max(4, int(np.ceil(h / ENVELOPE_STRIDE)))
    nx = max(4, int(np.ceil(w / ENVELOPE_STRIDE)))
    gy = np.linspace(0.0, h - 1.0, ny)
    gx = np.linspace(0.0, w - 1.0, nx)
    mesh = np.stack(np.meshgrid(gy, gx, indexing="ij"), axis=-1).reshape(-1, 2)
    coarse = rbf(mesh).reshape(ny, nx)
    if not np.all(np.isfinite(coarse)):
        raise SiftingDiverged("envelope interpolation produced non-finite values")
    spline = RectBivariateSpline(gy, gx, coarse, kx=3, ky=3)
    return spline(np.arange(h), np.arange(w))


def _sift_once(surface: np.ndarray):
    maxima, minima = _extrema(surface)
    if len(maxima) < MIN_EXTREMA or len(minima) < MIN_EXTREMA:
        return None
    upper = _envelope(surface, maxima)
    lower = _envelope(surface, minima)
    return surface - 0.5 * (upper + lower)


def decompose(
    plane: np.ndarray,
    imf_count: int = 3,
    max_iters: int = 10,
    sd_threshold: float = 0.3,
):
    """Extract `imf_count` IMFs and a residue from a 2-D surface.

    Returns (imfs, residue); the sum of all parts equals the input
    exactly. Surfaces that run out of extrema early yield all-zero
    trailing IMFs.
    """
    h, w = plane.shape
    if h < 8 or w < 8:
        raise ImageTooSmall(f"{h}x{w} plane too small for sifting (need 8x8)")

    residue = np.array(plane, dtype=np.float64, copy=True)
    imfs = []
    for _ in range(imf_count):
        candidate = _sift_once(residue)
        if candidate is None:
            imfs.append(np.zeros_like(residue))
            continue
        for _ in range(max_iters - 1):
            denom = np.sum(candidate**2)
            if denom <= 0:
                break
            refined = _sift_once(candidate)
            if refined is None:
                break
            sd = np.sum((candidate - refined) ** 2) / denom
            candidate = refined
            if sd < sd_threshold:
                break
        imfs.append(candidate)
        residue = residue - candidate
    return imfs, residue
