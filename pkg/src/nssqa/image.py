"""Image loading and elementary raster operations.

Pixels are held as double-precision floats from the moment of decode;
all downstream statistics are computed in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptImage, ImageTooSmall, UnsupportedFormat


@dataclass(frozen=True)
class ImagePlane:
    """A single 2-D channel of real-valued pixels."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"plane must be 2-D, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("plane contains non-finite values")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class RgbImage:
    """Three equally sized channels with values in [0, 255]."""

    r: ImagePlane
    g: ImagePlane
    b: ImagePlane

    def __post_init__(self):
        shapes = {self.r.data.shape, self.g.data.shape, self.b.data.shape}
        if len(shapes) != 1:
            raise ValueError(f"channel shapes differ: {shapes}")
        for plane in (self.r, self.g, self.b):
            if plane.data.min() < 0.0 or plane.data.max() > 255.0:
                raise ValueError("channel values outside [0, 255]")

    @property
    def height(self) -> int:
        return self.r.height

    @property
    def width(self) -> int:
        return self.r.width


def load_image(path) -> RgbImage:
    """Decode an 8-bit BMP/PNG (or similar) file into an RgbImage.

    Grayscale files are replicated into all three channels.

    Raises FileNotFoundError, UnsupportedFormat or CorruptImage.
    """
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(str(p))
    try:
        with Image.open(p) as im:
            if im.mode not in ("1", "L", "LA", "P", "RGB", "RGBA"):
                raise UnsupportedFormat(f"{p}: mode {im.mode} is not 8-bit raster")
            rgb = im.convert("RGB")
            arr = np.asarray(rgb, dtype=np.float64)
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{p}: not a recognized image format") from exc
    except OSError as exc:
        raise CorruptImage(f"{p}: {exc}") from exc
    return RgbImage(
        r=ImagePlane(arr[:, :, 0]),
        g=ImagePlane(arr[:, :, 1]),
        b=ImagePlane(arr[:, :, 2]),
    )


def save_image(img: RgbImage, path) -> None:
    """Write an RgbImage losslessly (PNG/BMP chosen by extension)."""
    arr = np.stack([img.r.data, img.g.data, img.b.data], axis=-1)
    Image.fromarray(np.round(arr).astype(np.uint8), mode="RGB").save(path)


def crop_to_even(plane: ImagePlane, factor: int) -> ImagePlane:
    """Largest top-left sub-plane with both dimensions divisible by factor."""
    if factor < 1:
        raise ValueError(f"factor must be >= 1, got {factor}")
    h = (plane.height // factor) * factor
    w = (plane.width // factor) * factor
    if h == 0 or w == 0:
        raise ImageTooSmall(
            f"{plane.height}x{plane.width} plane cannot be cropped to a multiple of {factor}"
        )
    if h == plane.height and w == plane.width:
        return plane
    return ImagePlane(plane.data[:h, :w])


def crop_rgb(img: RgbImage, factor: int) -> RgbImage:
    """crop_to_even applied to all three channels."""
    return RgbImage(
        r=crop_to_even(img.r, factor),
        g=crop_to_even(img.g, factor),
        b=crop_to_even(img.b, factor),
    )
