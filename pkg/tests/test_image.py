import numpy as np
import pytest

from nssqa.errors import ImageTooSmall, UnsupportedFormat
from nssqa.image import (
    ImagePlane,
    RgbImage,
    crop_rgb,
    crop_to_even,
    load_image,
    save_image,
)


def test_plane_is_float64_and_immutable():
    plane = ImagePlane(np.arange(12, dtype=np.int32).reshape(3, 4))
    assert plane.data.dtype == np.float64
    assert plane.height == 3 and plane.width == 4
    with pytest.raises(ValueError):
        plane.data[0, 0] = 99.0


def test_plane_rejects_bad_input():
    with pytest.raises(ValueError):
        ImagePlane(np.zeros(5))
    with pytest.raises(ValueError):
        ImagePlane(np.array([[0.0, np.nan]]))
    with pytest.raises(ValueError):
        ImagePlane(np.array([[0.0, np.inf]]))


def test_rgb_image_validation():
    good = ImagePlane(np.full((4, 4), 10.0))
    with pytest.raises(ValueError):
        RgbImage(r=good, g=good, b=ImagePlane(np.full((4, 5), 10.0)))
    with pytest.raises(ValueError):
        RgbImage(r=good, g=good, b=ImagePlane(np.full((4, 4), 256.0)))
    with pytest.raises(ValueError):
        RgbImage(r=good, g=good, b=ImagePlane(np.full((4, 4), -1.0)))


def test_png_round_trip_is_exact(tmp_path, rng):
    arr = rng.integers(0, 256, size=(20, 30, 3)).astype(np.float64)
    img = RgbImage(
        r=ImagePlane(arr[:, :, 0]), g=ImagePlane(arr[:, :, 1]), b=ImagePlane(arr[:, :, 2])
    )
    path = tmp_path / "img.png"
    save_image(img, path)
    back = load_image(path)
    assert np.array_equal(back.r.data, img.r.data)
    assert np.array_equal(back.g.data, img.g.data)
    assert np.array_equal(back.b.data, img.b.data)


def test_grayscale_file_replicates_channels(tmp_path):
    from PIL import Image

    path = tmp_path / "gray.png"
    Image.fromarray(np.arange(64, dtype=np.uint8).reshape(8, 8), mode="L").save(path)
    img = load_image(path)
    assert np.array_equal(img.r.data, img.g.data)
    assert np.array_equal(img.g.data, img.b.data)


def test_load_missing_and_non_image(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_image(tmp_path / "nope.png")
    junk = tmp_path / "junk.png"
    junk.write_text("not an image")
    with pytest.raises(UnsupportedFormat):
        load_image(junk)


def test_crop_to_even():
    plane = ImagePlane(np.zeros((10, 13)))
    cropped = crop_to_even(plane, 4)
    assert cropped.data.shape == (8, 12)
    # already divisible: same object back
    assert crop_to_even(cropped, 4) is cropped
    with pytest.raises(ImageTooSmall):
        crop_to_even(ImagePlane(np.zeros((3, 3))), 4)
    with pytest.raises(ValueError):
        crop_to_even(plane, 0)


def test_crop_rgb_applies_to_all_channels():
    plane = ImagePlane(np.zeros((10, 10)))
    img = RgbImage(r=plane, g=plane, b=plane)
    out = crop_rgb(img, 8)
    assert out.height == 8 and out.width == 8
