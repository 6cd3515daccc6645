"""Regenerate the bundled 256x256 sample images from scikit-image's data set.

Only needed by maintainers; requires scikit-image.
"""

from pathlib import Path

from skimage import data

from chaoscipher.cipher import ImageBuffer
from chaoscipher.imageio import resize_nearest, save, to_grayscale

OUT = Path(__file__).resolve().parents[1] / "src" / "chaoscipher" / "data"
SIZE = 256


def square(arr):
    h, w = arr.shape[:2]
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    return arr[top:top + s, left:left + s]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    sources = {
        "camera": data.camera(),
        "astronaut": data.astronaut(),
        "coffee": data.coffee(),
        "chelsea": data.chelsea(),
        "rocket": data.rocket(),
    }
    for name, arr in sources.items():
        img = resize_nearest(ImageBuffer.from_array(square(arr)), SIZE, SIZE)
        if img.channels == 3 and name != "rocket":
            save(to_grayscale(img), OUT / f"{name}.pgm")
        if img.channels == 3:
            save(img, OUT / f"{name}.ppm")
        else:
            save(img, OUT / f"{name}.pgm")
        print(name, img)


if __name__ == "__main__":
    main()
