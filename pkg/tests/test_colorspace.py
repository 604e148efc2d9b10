import numpy as np
import pytest

from nssqa.colorspace import (
    GRAY_WEIGHTS,
    ChannelStack,
    ColorSpace,
    convert,
    to_cielab,
    to_grayscale,
    to_rgb_stack,
)
from nssqa.image import ImagePlane, RgbImage


def _solid(r, g, b, shape=(8, 8)) -> RgbImage:
    return RgbImage(
        r=ImagePlane(np.full(shape, float(r))),
        g=ImagePlane(np.full(shape, float(g))),
        b=ImagePlane(np.full(shape, float(b))),
    )


def test_grayscale_weights():
    img = _solid(100, 50, 200)
    stack = to_grayscale(img)
    assert stack.space is ColorSpace.GRAYSCALE
    (name, plane), = stack.channels
    assert name == "Y"
    expected = 0.299 * 100 + 0.587 * 50 + 0.114 * 200
    assert np.allclose(plane.data, expected)
    assert abs(sum(GRAY_WEIGHTS) - 1.0) < 1e-12


def test_rgb_stack_is_passthrough():
    img = _solid(10, 20, 30)
    stack = to_rgb_stack(img)
    names = [n for n, _ in stack.channels]
    assert names == ["R", "G", "B"]
    assert stack.channels[0][1] is img.r


def test_cielab_neutral_axis_is_exactly_achromatic():
    """Any gray pixel must map to a* = b* = 0 to machine precision."""
    for v in (0, 32, 128, 255):
        stack = to_cielab(_solid(v, v, v))
        channels = dict(stack.channels)
        assert np.max(np.abs(channels["a*"].data)) < 1e-10
        assert np.max(np.abs(channels["b*"].data)) < 1e-10


def test_cielab_reference_points():
    white = dict(to_cielab(_solid(255, 255, 255)).channels)
    assert np.allclose(white["L*"].data, 100.0, atol=1e-8)
    black = dict(to_cielab(_solid(0, 0, 0)).channels)
    assert np.allclose(black["L*"].data, 0.0, atol=1e-8)
    # red has positive a*, blue negative b*
    red = dict(to_cielab(_solid(255, 0, 0)).channels)
    assert red["a*"].data[0, 0] > 50
    blue = dict(to_cielab(_solid(0, 0, 255)).channels)
    assert blue["b*"].data[0, 0] < -50


def test_cielab_lightness_is_monotone_in_gray_level():
    levels = [10, 60, 120, 200, 250]
    lstars = [dict(to_cielab(_solid(v, v, v)).channels)["L*"].data[0, 0] for v in levels]
    assert all(a < b for a, b in zip(lstars, lstars[1:]))


def test_convert_dispatch(small_reference):
    assert convert(small_reference, ColorSpace.GRAYSCALE).space is ColorSpace.GRAYSCALE
    assert convert(small_reference, ColorSpace.RGB).space is ColorSpace.RGB
    assert convert(small_reference, ColorSpace.CIELAB).space is ColorSpace.CIELAB


def test_channel_stack_validation():
    plane = ImagePlane(np.zeros((4, 4)))
    with pytest.raises(ValueError):
        ChannelStack(ColorSpace.GRAYSCALE, (("Y", plane), ("Z", plane)))
    with pytest.raises(ValueError):
        ChannelStack(ColorSpace.RGB, (("R", plane),))
    with pytest.raises(ValueError):
        ChannelStack(
            ColorSpace.RGB,
            (("R", plane), ("G", plane), ("B", ImagePlane(np.zeros((4, 5))))),
        )
