"""Color-space conversions feeding the measurement variants.

Grayscale uses BT.601 luma weights; CIELAB assumes sRGB primaries with
the D65 white point. Both choices are module constants so they can be
swapped if a dataset's provenance calls for it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .image import ImagePlane, RgbImage


class ColorSpace(enum.Enum):
    GRAYSCALE = "gray"
    RGB = "rgb"
    CIELAB = "lab"


@dataclass(frozen=True)
class ChannelStack:
    """Ordered named planes produced by one color-space conversion."""

    space: ColorSpace
    channels: tuple  # of (name, ImagePlane)

    def __post_init__(self):
        expected = 1 if self.space is ColorSpace.GRAYSCALE else 3
        if len(self.channels) != expected:
            raise ValueError(
                f"{self.space.value} stack needs {expected} channels, got {len(self.channels)}"
            )
        shapes = {p.data.shape for _, p in self.channels}
        if len(shapes) != 1:
            raise ValueError(f"channel shapes differ: {shapes}")


# BT.601 luma weights.
GRAY_WEIGHTS = (0.299, 0.587, 0.114)

# sRGB (linear) -> XYZ, D65 white point.
_SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
# White point taken as the matrix row sums so a neutral pixel maps to
# exactly equal X/Xn = Y/Yn = Z/Zn (hence a* = b* = 0 to machine precision).
_D65_WHITE = _SRGB_TO_XYZ.sum(axis=1)


def to_grayscale(img: RgbImage) -> ChannelStack:
    """Single luma channel Y = 0.299 R + 0.587 G + 0.114 B."""
    wr, wg, wb = GRAY_WEIGHTS
    y = wr * img.r.data + wg * img.g.data + wb * img.b.data
    return ChannelStack(ColorSpace.GRAYSCALE, (("Y", ImagePlane(y)),))


def to_rgb_stack(img: RgbImage) -> ChannelStack:
    """The three channels unchanged."""
    return ChannelStack(
        ColorSpace.RGB, (("R", img.r), ("G", img.g), ("B", img.b))
    )


def _srgb_expand(u: np.ndarray) -> np.ndarray:
    """sRGB gamma expansion, input in [0, 1]."""
    return np.where(u <= 0.04045, u / 12.92, ((u + 0.055) / 1.055) ** 2.4)


def _lab_f(t: np.ndarray) -> np.ndarray:
    delta = 6.0 / 29.0
    return np.where(t > delta**3, np.cbrt(t), t / (3.0 * delta**2) + 4.0 / 29.0)


def to_cielab(img: RgbImage) -> ChannelStack:
    """sRGB -> linear RGB -> XYZ(D65) -> CIELAB.

    Channels are returned in their native ranges (L* in [0, 100],
    a*/b* roughly +-128); downstream fitting is scale-covariant so no
    rescaling is applied.
    """
    rgb = np.stack([img.r.data, img.g.data, img.b.data], axis=-1) / 255.0
    linear = _srgb_expand(rgb)
    xyz = linear @ _SRGB_TO_XYZ.T
    fxyz = _lab_f(xyz / _D65_WHITE)
    fx, fy, fz = fxyz[..., 0], fxyz[..., 1], fxyz[..., 2]
    l_star = 116.0 * fy - 16.0
    a_star = 500.0 * (fx - fy)
    b_star = 200.0 * (fy - fz)
    return ChannelStack(
        ColorSpace.CIELAB,
        (("L*", ImagePlane(l_star)), ("a*", ImagePlane(a_star)), ("b*", ImagePlane(b_star))),
    )


def convert(img: RgbImage, space: ColorSpace) -> ChannelStack:
    """Dispatch on the ColorSpace enum."""
    if space is ColorSpace.GRAYSCALE:
        return to_grayscale(img)
    if space is ColorSpace.RGB:
        return to_rgb_stack(img)
    return to_cielab(img)
