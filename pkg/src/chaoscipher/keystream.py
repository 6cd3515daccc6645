"""Turn chaotic orbits into per-sample keystream bytes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientOrbit
from .maps import MapId, Orbit, orbit

__all__ = [
    "Keystream",
    "SCALE",
    "normalize_state",
    "keystream_from_orbit3",
    "keystream_from_orbit2",
    "keystream_for_config",
]

SCALE = 1e6


@dataclass(frozen=True, eq=False)
class Keystream:
    """Byte streams for one image.

    The 3D pipeline fills ``kx``, ``ky`` and ``kz``; the 2D pipeline fills
    ``kx`` and ``kq``. All present streams are uint8 arrays of equal length.
    """

    kx: np.ndarray
    ky: np.ndarray | None = None
    kz: np.ndarray | None = None
    kq: np.ndarray | None = None

    def __post_init__(self) -> None:
        lengths = {len(s) for s in self.streams().values()}
        if len(lengths) != 1:
            raise ValueError(f"keystream components differ in length: {sorted(lengths)}")

    @property
    def map_id(self) -> MapId:
        return MapId.HYPER3D if self.kz is not None else MapId.MEM2D

    def streams(self) -> dict[str, np.ndarray]:
        return {
            name: s
            for name, s in (("kx", self.kx), ("ky", self.ky), ("kz", self.kz), ("kq", self.kq))
            if s is not None
        }

    def __len__(self) -> int:
        return len(self.kx)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Keystream):
            return NotImplemented
        mine, theirs = self.streams(), other.streams()
        return mine.keys() == theirs.keys() and all(np.array_equal(mine[k], theirs[k]) for k in mine)

    def to_bytes(self) -> bytes:
        """Streams concatenated in field order; used for debug dumps and test vectors."""
        return b"".join(s.tobytes() for s in self.streams().values())


def normalize_state(v):
    """Fractional part of ``|v| * 1e6``, in [0, 1). Works on scalars and arrays."""
    frac = np.modf(np.abs(np.asarray(v, dtype=np.float64)) * SCALE)[0]
    return float(frac) if np.ndim(frac) == 0 else frac


def _to_bytes(values: np.ndarray) -> np.ndarray:
    # floor(u * 255) with u in [0, 1) lies in 0..254
    return np.floor(normalize_state(values) * 255.0).astype(np.uint8)


def _check_length(orb: Orbit, n: int) -> None:
    if n < 0:
        raise ValueError(f"sample count must be >= 0, got {n}")
    if len(orb) < n:
        raise InsufficientOrbit(f"orbit has {len(orb)} states, {n} required")


def keystream_from_orbit3(orb: Orbit, n_pixels: int) -> Keystream:
    _check_length(orb, n_pixels)
    s = orb.states[:n_pixels]
    return Keystream(kx=_to_bytes(s[:, 0]), ky=_to_bytes(s[:, 1]), kz=_to_bytes(s[:, 2]))


def keystream_from_orbit2(orb: Orbit, n_values: int) -> Keystream:
    _check_length(orb, n_values)
    s = orb.states[:n_values]
    return Keystream(kx=_to_bytes(s[:, 0]), kq=_to_bytes(s[:, 1]))


def keystream_for_config(config, n: int) -> Keystream:
    """Generate the orbit for a :class:`~chaoscipher.keys.DerivedConfig` and extract ``n`` samples."""
    orb = orbit(config.map_id, config.params, config.seed_state, config.burn_in, max(n, 1))
    if config.map_id is MapId.HYPER3D:
        return keystream_from_orbit3(orb, n)
    return keystream_from_orbit2(orb, n)
