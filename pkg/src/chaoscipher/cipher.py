"""Keystream image cipher: XOR/add/subtract (3D map) and XOR/add (2D map).

Every stage is reduced mod 256 so each one can be undone on bytes. Encryption
and decryption are elementwise over the flat, row-major, channel-interleaved
sample index ``((row * width) + col) * channels + channel``.

This is a pure stream cipher: there is no plaintext-dependent diffusion and no
integrity tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import KeystreamMismatch
from .keys import ChaoticKey, DerivedConfig, derive_config
from .keystream import Keystream, keystream_for_config
from .maps import MapId

__all__ = [
    "ImageBuffer",
    "CipherMode",
    "encrypt3",
    "decrypt3",
    "encrypt2",
    "decrypt2",
    "encrypt_with_config",
    "decrypt_with_config",
    "encrypt_with_key",
    "decrypt_with_key",
    "default_mode",
]


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """8-bit image stored as a flat uint8 array."""

    width: int
    height: int
    channels: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.channels not in (1, 3):
            raise ValueError(f"channels must be 1 or 3, got {self.channels}")
        if self.width < 0 or self.height < 0:
            raise ValueError("dimensions must be non-negative")
        pixels = np.ascontiguousarray(self.pixels)
        if pixels.dtype != np.uint8:
            if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            pixels = pixels.astype(np.uint8)
        pixels = pixels.reshape(-1)
        if pixels.size != self.width * self.height * self.channels:
            raise ValueError(
                f"expected {self.width * self.height * self.channels} samples, got {pixels.size}"
            )
        object.__setattr__(self, "pixels", pixels)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "ImageBuffer":
        """Build from an ``(h, w)`` or ``(h, w, 3)`` array."""
        arr = np.asarray(arr)
        if arr.ndim == 2:
            return cls(arr.shape[1], arr.shape[0], 1, arr)
        if arr.ndim == 3 and arr.shape[2] in (1, 3):
            return cls(arr.shape[1], arr.shape[0], arr.shape[2], arr)
        raise ValueError(f"unsupported array shape {arr.shape}")

    @property
    def array(self) -> np.ndarray:
        """View shaped ``(h, w)`` for grayscale or ``(h, w, 3)`` for RGB."""
        if self.channels == 1:
            return self.pixels.reshape(self.height, self.width)
        return self.pixels.reshape(self.height, self.width, self.channels)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.height, self.width, self.channels)

    @property
    def size(self) -> int:
        return self.pixels.size

    def with_pixels(self, pixels: np.ndarray) -> "ImageBuffer":
        return ImageBuffer(self.width, self.height, self.channels, pixels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"ImageBuffer(width={self.width}, height={self.height}, channels={self.channels})"


class CipherMode(str, Enum):
    HYPER3D = "3d"
    MEM2D = "2d"

    @property
    def map_id(self) -> MapId:
        return MapId(self.value)


def default_mode(img: ImageBuffer) -> CipherMode:
    """Grayscale pairs with the 3D map, colour with the 2D map."""
    return CipherMode.HYPER3D if img.channels == 1 else CipherMode.MEM2D


def _streams(img: ImageBuffer, ks: Keystream, names: tuple[str, ...]) -> list[np.ndarray]:
    out = []
    for name in names:
        s = getattr(ks, name)
        if s is None:
            raise KeystreamMismatch(f"keystream has no {name} component")
        if len(s) != img.size:
            raise KeystreamMismatch(f"keystream length {len(s)} != sample count {img.size}")
        out.append(s)
    return out


def encrypt3(plain: ImageBuffer, ks: Keystream) -> ImageBuffer:
    kx, ky, kz = _streams(plain, ks, ("kx", "ky", "kz"))
    # uint8 arithmetic wraps mod 256 after each stage
    e = plain.pixels ^ kx
    e = e + ky
    e = e - kz
    return plain.with_pixels(e)


def decrypt3(cipher: ImageBuffer, ks: Keystream) -> ImageBuffer:
    kx, ky, kz = _streams(cipher, ks, ("kx", "ky", "kz"))
    p = cipher.pixels + kz
    p = p - ky
    p = p ^ kx
    return cipher.with_pixels(p)


def encrypt2(plain: ImageBuffer, ks: Keystream) -> ImageBuffer:
    kx, kq = _streams(plain, ks, ("kx", "kq"))
    return plain.with_pixels((plain.pixels ^ kx) + kq)


def decrypt2(cipher: ImageBuffer, ks: Keystream) -> ImageBuffer:
    kx, kq = _streams(cipher, ks, ("kx", "kq"))
    return cipher.with_pixels((cipher.pixels - kq) ^ kx)


def encrypt_with_config(plain: ImageBuffer, config: DerivedConfig) -> ImageBuffer:
    ks = keystream_for_config(config, plain.size)
    return encrypt3(plain, ks) if config.map_id is MapId.HYPER3D else encrypt2(plain, ks)


def decrypt_with_config(cipher: ImageBuffer, config: DerivedConfig) -> ImageBuffer:
    ks = keystream_for_config(config, cipher.size)
    return decrypt3(cipher, ks) if config.map_id is MapId.HYPER3D else decrypt2(cipher, ks)


def _check_nonempty(img: ImageBuffer) -> None:
    if img.size == 0:
        raise ValueError("image is empty")


def encrypt_with_key(plain: ImageBuffer, key: ChaoticKey, mode: CipherMode | str) -> ImageBuffer:
    _check_nonempty(plain)
    return encrypt_with_config(plain, derive_config(key, CipherMode(mode).map_id))


def decrypt_with_key(cipher: ImageBuffer, key: ChaoticKey, mode: CipherMode | str) -> ImageBuffer:
    _check_nonempty(cipher)
    return decrypt_with_config(cipher, derive_config(key, CipherMode(mode).map_id))
