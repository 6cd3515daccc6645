"""Secret keys and the deterministic key -> map configuration derivation.

A key is a lowercase hex string of 128 or 256 bits drawn from the operating
system CSPRNG. :func:`derive_config` cuts the key bytes into one contiguous
field per derived quantity, reduces each field to an integer of at most
``FIELD_BITS`` bits, and maps it affinely into a range chosen to keep the map
inside its hyperchaotic regime:

====================  =======================================
3D seed x, y, z       [0.05, 0.95)
3D a1, a2             reference value + [-0.005, +0.005)
3D a3                 reference value + [0, +0.005)
2D seed x             [0.05, 0.35)
2D seed q             [0.05, 0.55)
2D k                  [1.75, 1.758)
====================  =======================================

The boxes avoid measured periodic windows and escape regions. The 2D seed box
is narrower than the 3D one because the memristor map has a line of fixed
points (x = 0) and an escape region; seeds outside it can collapse onto the
line or diverge. Lowering a3 below its reference value opens wide periodic
windows in the 3D map, so that offset is one-sided. The k range stops short of
a period-16 window near 1.7585 and of a period-12 cascade just above 1.74.
"""

from __future__ import annotations

import re
import secrets
from dataclasses import dataclass, replace

from .errors import EntropyUnavailable
from .maps import (
    DEFAULT_BURN_IN,
    Hyper3DParams,
    MapId,
    Mem2DParams,
    State2,
    State3,
)

__all__ = [
    "ALLOWED_BITS",
    "FIELD_BITS",
    "ChaoticKey",
    "DerivedConfig",
    "generate_key",
    "derive_config",
    "scaled_fields",
]

ALLOWED_BITS = (128, 256)
# 44-bit quanta stay above one ulp over every target range (k needs < 45 bits)
FIELD_BITS = 44
PERTURBATION = 0.005
# offset range per 3D coefficient, in units of PERTURBATION
COEFF_OFFSETS = {"a1": (-1.0, 1.0), "a2": (-1.0, 1.0), "a3": (0.0, 1.0)}

SEED3_RANGE = (0.05, 0.95)
SEED2_X_RANGE = (0.05, 0.35)
SEED2_Q_RANGE = (0.05, 0.55)
K_RANGE = (1.75, 1.758)

_HEX = re.compile(r"[0-9a-f]+")


@dataclass(frozen=True)
class ChaoticKey:
    hex: str

    def __post_init__(self) -> None:
        if not _HEX.fullmatch(self.hex):
            raise ValueError("key must be a non-empty lowercase hexadecimal string")
        if len(self.hex) * 4 not in ALLOWED_BITS:
            raise ValueError(
                f"key must be {ALLOWED_BITS} bits ({[b // 4 for b in ALLOWED_BITS]} hex chars), "
                f"got {len(self.hex)} chars"
            )

    @classmethod
    def parse(cls, text: str) -> "ChaoticKey":
        """Accept key text as typed or read from a file (surrounding whitespace ignored)."""
        return cls(text.strip().lower())

    @property
    def bit_length(self) -> int:
        return len(self.hex) * 4

    @property
    def bytes(self) -> bytes:
        return bytes.fromhex(self.hex)

    def __str__(self) -> str:
        return self.hex


@dataclass(frozen=True)
class DerivedConfig:
    map_id: MapId
    params: Hyper3DParams | Mem2DParams
    seed_state: State3 | State2
    burn_in: int = DEFAULT_BURN_IN


def generate_key(bit_length: int = 256) -> ChaoticKey:
    if bit_length not in ALLOWED_BITS:
        raise ValueError(f"bit_length must be one of {ALLOWED_BITS}, got {bit_length}")
    try:
        return ChaoticKey(secrets.token_hex(bit_length // 8))
    except (OSError, NotImplementedError) as exc:
        raise EntropyUnavailable(str(exc)) from exc


def _split(data: bytes, n_fields: int) -> list[bytes]:
    # contiguous fields, sizes differ by at most one byte, larger ones first
    base, extra = divmod(len(data), n_fields)
    out, pos = [], 0
    for i in range(n_fields):
        size = base + (1 if i < extra else 0)
        out.append(data[pos:pos + size])
        pos += size
    return out


def _fold(chunk: bytes) -> tuple[int, int]:
    """Reduce a field to ``(value, bits)`` with ``0 <= value < 2**bits``.

    Fields longer than FIELD_BITS are folded with an end-around carry
    (reduction mod 2**FIELD_BITS - 1). Flipping one input bit shifts the
    residue by a power of two, so every bit still moves the result. An
    all-ones field is pinned to the top value so that all-zero / all-ones
    fields land on the bottom / top of the range.
    """
    raw = int.from_bytes(chunk, "big")
    bits = 8 * len(chunk)
    if bits <= FIELD_BITS:
        return raw, bits
    modulus = (1 << FIELD_BITS) - 1
    if raw == (1 << bits) - 1:
        return modulus, FIELD_BITS
    return raw % modulus, FIELD_BITS


def scaled_fields(key: ChaoticKey, n_fields: int) -> list[float]:
    """Key fields scaled to [0, 1); exact because every value has <= 44 bits."""
    out = []
    for chunk in _split(key.bytes, n_fields):
        value, bits = _fold(chunk)
        out.append(value / (1 << bits))
    return out


def _affine(u: float, lo: float, hi: float) -> float:
    return lo + (hi - lo) * u


def derive_config(key: ChaoticKey, map_id: MapId | str) -> DerivedConfig:
    map_id = MapId(map_id)
    if map_id is MapId.HYPER3D:
        ux, uy, uz, *coeff_u = scaled_fields(key, 6)
        ref = Hyper3DParams()
        shifted = {
            name: getattr(ref, name) + PERTURBATION * _affine(u, *COEFF_OFFSETS[name])
            for name, u in zip(COEFF_OFFSETS, coeff_u)
        }
        params = replace(ref, **shifted)
        seed = State3(*(_affine(u, *SEED3_RANGE) for u in (ux, uy, uz)))
        return DerivedConfig(map_id, params, seed)

    ux, uq, uk = scaled_fields(key, 3)
    return DerivedConfig(
        map_id,
        Mem2DParams(k=_affine(uk, *K_RANGE)),
        State2(_affine(ux, *SEED2_X_RANGE), _affine(uq, *SEED2_Q_RANGE)),
    )
