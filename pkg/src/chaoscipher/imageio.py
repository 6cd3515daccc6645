"""Binary PGM (P5) / PPM (P6) codec with maxval 255, plus small image helpers."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .cipher import ImageBuffer
from .errors import IoFailure, MalformedHeader, TruncatedPixelData, UnsupportedFormat

__all__ = ["decode", "encode", "load", "save", "to_grayscale", "resize_nearest"]

_MAGIC_CHANNELS = {b"P5": 1, b"P6": 3}
_WHITESPACE = b" \t\n\r\v\f"


def _header_tokens(data: bytes, count: int, pos: int) -> tuple[list[bytes], int]:
    tokens: list[bytes] = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in _WHITESPACE:
            pos += 1
        if pos < n and data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise MalformedHeader("header ended before width/height/maxval were read")
        tokens.append(data[start:pos])
    return tokens, pos


def decode(data: bytes) -> ImageBuffer:
    magic = data[:2]
    if magic not in _MAGIC_CHANNELS:
        raise UnsupportedFormat(f"expected binary PGM/PPM magic P5 or P6, got {magic!r}")
    channels = _MAGIC_CHANNELS[magic]
    if len(data) > 2 and data[2] not in _WHITESPACE:
        raise MalformedHeader("magic number must be followed by whitespace")
    tokens, pos = _header_tokens(data, 3, 2)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise MalformedHeader(f"non-integer header fields {tokens!r}") from None
    if width <= 0 or height <= 0:
        raise MalformedHeader(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormat(f"only maxval 255 is supported, got {maxval}")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise MalformedHeader("missing whitespace after maxval")
    pos += 1
    expected = width * height * channels
    body = data[pos:pos + expected]
    if len(body) < expected:
        raise TruncatedPixelData(f"expected {expected} pixel bytes, found {len(body)}")
    pixels = np.frombuffer(body, dtype=np.uint8).copy()
    return ImageBuffer(width, height, channels, pixels)


def encode(img: ImageBuffer) -> bytes:
    if img.width < 1 or img.height < 1:
        raise ValueError(f"cannot encode a {img.width}x{img.height} image")
    magic = "P5" if img.channels == 1 else "P6"
    return f"{magic} {img.width} {img.height} 255\n".encode("ascii") + img.pixels.tobytes()


def load(path: str | os.PathLike) -> ImageBuffer:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    return decode(data)


def save(img: ImageBuffer, path: str | os.PathLike) -> None:
    payload = encode(img)
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def to_grayscale(img: ImageBuffer) -> ImageBuffer:
    """BT.601 luma, rounded half up. Grayscale input is returned unchanged."""
    if img.channels == 1:
        return img
    rgb = img.pixels.reshape(-1, 3).astype(np.float64)
    gray = np.floor(rgb @ np.array([0.299, 0.587, 0.114]) + 0.5)
    gray = np.clip(gray, 0, 255).astype(np.uint8)
    return ImageBuffer(img.width, img.height, 1, gray)


def resize_nearest(img: ImageBuffer, new_w: int, new_h: int) -> ImageBuffer:
    if new_w < 1 or new_h < 1:
        raise ValueError(f"target size must be at least 1x1, got {new_w}x{new_h}")
    rows = (np.arange(new_h) * img.height) // new_h
    cols = (np.arange(new_w) * img.width) // new_w
    arr = img.pixels.reshape(img.height, img.width, img.channels)
    out = arr[rows[:, None], cols[None, :]]
    return ImageBuffer(new_w, new_h, img.channels, out)
