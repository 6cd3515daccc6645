"""Bundled public-domain / CC0 test images (256x256).

Grayscale (P5): camera, astronaut, coffee, chelsea.
Colour (P6): astronaut, coffee, chelsea, rocket.

Sources are scikit-image sample images: camera (CC0, Lav Varshney),
coffee (CC0, Rachel Michetti), chelsea (CC0, Stefan van der Walt),
astronaut (NASA, public domain), rocket (SpaceX, public domain).
"""

from __future__ import annotations

from importlib import resources

from .cipher import ImageBuffer
from .imageio import decode

GRAY_SAMPLES = ("camera", "astronaut", "coffee", "chelsea")
COLOR_SAMPLES = ("astronaut", "coffee", "chelsea", "rocket")


def sample_path(name: str, color: bool = False):
    suffix = "ppm" if color else "pgm"
    return resources.files("chaoscipher") / "data" / f"{name}.{suffix}"


def load_sample(name: str, color: bool = False) -> ImageBuffer:
    names = COLOR_SAMPLES if color else GRAY_SAMPLES
    if name not in names:
        raise KeyError(f"unknown {'colour' if color else 'grayscale'} sample {name!r}; choose from {names}")
    return decode(sample_path(name, color).read_bytes())
