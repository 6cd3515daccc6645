"""Chaos-keystream image encryption with a 3D hyperchaotic map and a 2D memristor map."""

from .cipher import (
    CipherMode,
    ImageBuffer,
    decrypt2,
    decrypt3,
    decrypt_with_key,
    encrypt2,
    encrypt3,
    encrypt_with_key,
)
from .errors import ChaosCipherError
from .keys import ChaoticKey, derive_config, generate_key
from .maps import Hyper3DParams, MapId, Mem2DParams, State2, State3

__version__ = "0.1.0"

__all__ = [
    "CipherMode",
    "ChaosCipherError",
    "ChaoticKey",
    "Hyper3DParams",
    "ImageBuffer",
    "MapId",
    "Mem2DParams",
    "State2",
    "State3",
    "decrypt2",
    "decrypt3",
    "decrypt_with_key",
    "derive_config",
    "encrypt2",
    "encrypt3",
    "encrypt_with_key",
    "generate_key",
]
