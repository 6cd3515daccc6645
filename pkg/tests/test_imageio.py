import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaoscipher.cipher import ImageBuffer
from chaoscipher.errors import IoFailure, MalformedHeader, TruncatedPixelData, UnsupportedFormat
from chaoscipher.imageio import decode, encode, load, resize_nearest, save, to_grayscale


def test_decode_p5():
    img = decode(b"P5 2 2 255\n" + bytes([1, 2, 3, 4]))
    assert img.shape == (2, 2, 1)
    assert img.pixels.tolist() == [1, 2, 3, 4]


def test_decode_p6():
    img = decode(b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 255, 0]))
    assert img.channels == 3
    assert img.array[0, 0].tolist() == [255, 0, 0]
    assert img.array[0, 1].tolist() == [0, 255, 0]


def test_comments_tolerated():
    img = decode(b"P5\n# made by hand\n2 # width\n1\n255\n\x07\x08")
    assert img.pixels.tolist() == [7, 8]


def test_encode_is_deterministic():
    img = ImageBuffer(3, 1, 1, np.array([9, 8, 7], np.uint8))
    assert encode(img) == b"P5 3 1 255\n\x09\x08\x07"
    assert encode(ImageBuffer(1, 1, 3, np.array([1, 2, 3], np.uint8))).startswith(b"P6 1 1 255\n")


@pytest.mark.parametrize(
    "data,error",
    [
        (b"P5 2 2 65535\n" + bytes(8), UnsupportedFormat),
        (b"P2 2 2 255\n1 2 3 4", UnsupportedFormat),
        (b"", UnsupportedFormat),
        (b"P5 2", MalformedHeader),
        (b"P5 a b 255\n" + bytes(4), MalformedHeader),
        (b"P5 0 2 255\n", MalformedHeader),
        (b"P5x2 2 255\n" + bytes(4), MalformedHeader),
        (b"P5 2 2 255", MalformedHeader),
        (b"P5 2 2 255\n" + bytes(3), TruncatedPixelData),
        (b"P6 2 2 255\n" + bytes(11), TruncatedPixelData),
    ],
)
def test_malformed_inputs(data, error):
    with pytest.raises(error):
        decode(data)


def test_zero_size_cannot_be_saved(tmp_path):
    with pytest.raises(ValueError):
        save(ImageBuffer(0, 0, 1, np.zeros(0, np.uint8)), tmp_path / "x.pgm")


def test_missing_file(tmp_path):
    with pytest.raises(IoFailure):
        load(tmp_path / "nope.pgm")


@settings(max_examples=100, deadline=None)
@given(w=st.integers(1, 20), h=st.integers(1, 20), c=st.sampled_from([1, 3]), data=st.data())
def test_encode_decode_identity(w, h, c, data):
    raw = data.draw(st.binary(min_size=w * h * c, max_size=w * h * c))
    img = ImageBuffer(w, h, c, np.frombuffer(raw, np.uint8))
    blob = encode(img)
    assert decode(blob) == img
    assert encode(decode(blob)) == blob


def test_save_load_file(tmp_path, color_images):
    img = color_images["rocket"]
    save(img, tmp_path / "r.ppm")
    assert load(tmp_path / "r.ppm") == img


def test_grayscale_examples():
    rgb = ImageBuffer(3, 1, 3, np.array([255, 255, 255, 255, 0, 0, 0, 0, 0], np.uint8))
    assert to_grayscale(rgb).pixels.tolist() == [255, 76, 0]


def test_grayscale_idempotent_through_codec(color_images):
    gray = to_grayscale(color_images["coffee"])
    again = to_grayscale(decode(encode(gray)))
    assert again == gray


def test_resize_examples():
    img = ImageBuffer(2, 2, 1, np.array([1, 2, 3, 4], np.uint8))
    assert resize_nearest(img, 2, 2) == img
    assert resize_nearest(img, 1, 1).pixels.tolist() == [1]
    one = ImageBuffer(1, 1, 3, np.array([5, 6, 7], np.uint8))
    big = resize_nearest(one, 3, 3)
    assert big.shape == (3, 3, 3)
    assert big.pixels.reshape(-1, 3).tolist() == [[5, 6, 7]] * 9


@settings(max_examples=50, deadline=None)
@given(w=st.integers(1, 12), h=st.integers(1, 12), nw=st.integers(1, 30), nh=st.integers(1, 30), data=st.data())
def test_resize_keeps_value_set(w, h, nw, nh, data):
    raw = data.draw(st.binary(min_size=w * h, max_size=w * h))
    img = ImageBuffer(w, h, 1, np.frombuffer(raw, np.uint8))
    out = resize_nearest(img, nw, nh)
    assert set(out.pixels.tolist()) <= set(img.pixels.tolist())
