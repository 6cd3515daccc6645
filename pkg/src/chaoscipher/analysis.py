"""Security and quality metrics for image ciphers, plus experiment harnesses.

All metrics are pure functions of their inputs. Randomized helpers take an
explicit integer seed and are reproducible byte-for-byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .cipher import (
    CipherMode,
    ImageBuffer,
    decrypt_with_config,
    encrypt_with_config,
)
from .errors import DegenerateVariance, ShapeMismatch, TooSmall
from .keys import ChaoticKey, derive_config
from .maps import MapId

__all__ = [
    "IDENTICAL",
    "AnalysisReport",
    "NoiseSpec",
    "Direction",
    "entropy",
    "histogram",
    "pearson",
    "channel_correlations",
    "adjacent_pixel_correlation",
    "sequence_autocorrelation",
    "mse",
    "ssim",
    "psnr",
    "npcr",
    "uaci",
    "add_gaussian_noise",
    "random_image",
    "flip_hex_digit",
    "noise_robustness_experiment",
    "key_sensitivity_experiment",
    "differential_experiment",
]


class _Identical:
    """PSNR of two identical images (MSE = 0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "IDENTICAL"

    def __str__(self) -> str:
        return "identical"

    def __reduce__(self):
        return (_Identical, ())


IDENTICAL = _Identical()
IDENTICAL_TEXT = "identical"


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _clean_value(name: str, value):
    if value is IDENTICAL:
        return IDENTICAL_TEXT
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"report value {name!r} is not finite: {value!r}")
    return value


@dataclass
class AnalysisReport:
    """Result of a metric or experiment.

    ``scalars`` and ``per_channel`` hold finite numbers (or the string
    ``"identical"`` for PSNR of equal images). ``rows`` carries tabular
    experiment output in a fixed column order.
    """

    metric_name: str
    scalars: dict = field(default_factory=dict)
    per_channel: dict | None = None
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.scalars = {k: _clean_value(k, v) for k, v in self.scalars.items()}
        if self.per_channel is not None:
            self.per_channel = {str(k): _clean_value(str(k), v) for k, v in self.per_channel.items()}
        self.rows = [{k: _clean_value(k, v) for k, v in row.items()} for row in self.rows]

    def to_dict(self) -> dict:
        return {
            "metric": self.metric_name,
            "scalars": self.scalars,
            "per_channel": self.per_channel,
            "rows": self.rows,
            "metadata": self.metadata,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        doc = json.loads(text)
        return cls(doc["metric"], doc["scalars"], doc["per_channel"], doc["rows"], doc["metadata"])

    def to_csv(self) -> str:
        """Long-form CSV: ``section,name,index,value`` with one value per line.

        Floats are written with ``repr`` so the text round-trips exactly;
        metadata values are JSON-encoded.
        """
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("section", "name", "index", "value"))
        w.writerow(("metric", "metric", "", self.metric_name))
        for k, v in self.scalars.items():
            w.writerow(("scalar", k, "", _csv_value(v)))
        for k, v in (self.per_channel or {}).items():
            w.writerow(("channel", k, "", _csv_value(v)))
        for i, row in enumerate(self.rows):
            for k, v in row.items():
                w.writerow(("row", k, i, _csv_value(v)))
        for k, v in self.metadata.items():
            w.writerow(("meta", k, "", json.dumps(v, sort_keys=True)))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "AnalysisReport":
        reader = csv.reader(io.StringIO(text))
        next(reader)
        name = ""
        scalars: dict = {}
        per_channel: dict | None = None
        rows: list[dict] = []
        metadata: dict = {}
        for section, key, index, value in reader:
            if section == "metric":
                name = value
            elif section == "scalar":
                scalars[key] = _parse_csv_value(value)
            elif section == "channel":
                per_channel = per_channel or {}
                per_channel[key] = _parse_csv_value(value)
            elif section == "row":
                i = int(index)
                while len(rows) <= i:
                    rows.append({})
                rows[i][key] = _parse_csv_value(value)
            elif section == "meta":
                metadata[key] = json.loads(value)
        return cls(name, scalars, per_channel, rows, metadata)

    def rows_csv(self) -> str:
        """Rows only, as a conventional wide table (handy for plotting)."""
        if not self.rows:
            return ""
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(self.rows[0]), lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: _csv_value(v) for k, v in row.items()})
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [self.metric_name]
        lines += [f"  {k}: {v}" for k, v in self.scalars.items()]
        lines += [f"  channel {k}: {v}" for k, v in (self.per_channel or {}).items()]
        if self.rows:
            lines.append("  " + "\t".join(self.rows[0]))
            lines += ["  " + "\t".join(str(v) for v in row.values()) for row in self.rows]
        return "\n".join(lines) + "\n"


def _csv_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_csv_value(text: str):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


# ---------------------------------------------------------------------------
# distribution metrics
# ---------------------------------------------------------------------------

def histogram(img: ImageBuffer, per_channel: bool = False) -> np.ndarray:
    """256-bin occurrence counts; shape ``(256,)`` or ``(channels, 256)``."""
    if img.size == 0:
        raise ValueError("histogram of an empty image")
    if per_channel:
        samples = img.pixels.reshape(-1, img.channels)
        return np.stack([np.bincount(samples[:, c], minlength=256) for c in range(img.channels)])
    return np.bincount(img.pixels, minlength=256)


def entropy(img: ImageBuffer) -> float:
    """Shannon entropy in bits of the byte histogram over all channel samples."""
    counts = histogram(img)
    p = counts[counts > 0] / img.size
    return float(max(0.0, -np.sum(p * np.log2(p))))


# ---------------------------------------------------------------------------
# correlation
# ---------------------------------------------------------------------------

class Direction(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"


_OFFSETS = {
    Direction.HORIZONTAL: (0, 1),
    Direction.VERTICAL: (1, 0),
    Direction.DIAGONAL: (1, 1),
}


def pearson(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    """Pearson correlation coefficient.

    Returns 0.0 when exactly one input is constant (no linear relationship);
    raises :class:`DegenerateVariance` when both are.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ShapeMismatch(f"length {a.size} != {b.size}")
    if a.size < 2:
        raise ValueError("pearson needs at least two samples")
    da = a - a.mean()
    db = b - b.mean()
    saa = float(np.dot(da, da))
    sbb = float(np.dot(db, db))
    if saa == 0.0 and sbb == 0.0:
        raise DegenerateVariance("both sequences are constant")
    if saa == 0.0 or sbb == 0.0:
        return 0.0
    rho = float(np.dot(da, db)) / math.sqrt(saa * sbb)
    return min(1.0, max(-1.0, rho))


def channel_correlations(a: ImageBuffer, b: ImageBuffer) -> dict[int, float]:
    """Whole-channel Pearson coefficient between two images, per channel."""
    _same_shape(a, b)
    ca = a.pixels.reshape(-1, a.channels)
    cb = b.pixels.reshape(-1, b.channels)
    return {c: pearson(ca[:, c], cb[:, c]) for c in range(a.channels)}


def adjacent_pixel_correlation(
    img: ImageBuffer,
    direction: Direction | str = Direction.HORIZONTAL,
    n_samples: int = 5000,
    rng_seed: int = 0,
) -> float:
    """Correlation between randomly sampled pixels and their neighbour."""
    if img.width < 2 or img.height < 2:
        raise TooSmall("adjacent-pixel correlation needs at least a 2x2 image")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    dr, dc = _OFFSETS[Direction(direction)]
    rng = np.random.default_rng(rng_seed)
    rows = rng.integers(0, img.height - dr, n_samples)
    cols = rng.integers(0, img.width - dc, n_samples)
    chans = rng.integers(0, img.channels, n_samples)
    arr = img.pixels.reshape(img.height, img.width, img.channels)
    return pearson(arr[rows, cols, chans], arr[rows + dr, cols + dc, chans])


def sequence_autocorrelation(seq: Sequence[float] | np.ndarray, max_lag: int) -> list[tuple[int, float]]:
    """Pearson coefficient between the sequence and itself shifted by 1..max_lag."""
    s = np.asarray(seq, dtype=np.float64).ravel()
    if max_lag < 1 or s.size <= max_lag:
        raise ValueError(f"need len(seq) > max_lag >= 1, got len={s.size}, max_lag={max_lag}")
    return [(lag, pearson(s[:-lag], s[lag:])) for lag in range(1, max_lag + 1)]


# ---------------------------------------------------------------------------
# fidelity / difference metrics
# ---------------------------------------------------------------------------

def _same_shape(a: ImageBuffer, b: ImageBuffer) -> None:
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} != {b.shape}")


def mse(a: ImageBuffer, b: ImageBuffer) -> float:
    _same_shape(a, b)
    d = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    return float(np.mean(d * d))


def psnr(a: ImageBuffer, b: ImageBuffer):
    """Peak signal-to-noise ratio in dB, or :data:`IDENTICAL` when MSE is 0."""
    err = mse(a, b)
    if err == 0.0:
        return IDENTICAL
    return 10.0 * math.log10(255.0 ** 2 / err)


def npcr(c1: ImageBuffer, c2: ImageBuffer) -> float:
    _same_shape(c1, c2)
    return 100.0 * float(np.count_nonzero(c1.pixels != c2.pixels)) / c1.size


def uaci(c1: ImageBuffer, c2: ImageBuffer) -> float:
    _same_shape(c1, c2)
    d = np.abs(c1.pixels.astype(np.int64) - c2.pixels.astype(np.int64))
    return 100.0 * float(np.mean(d / 255.0))


SSIM_WINDOW = 8
SSIM_C1 = (0.01 * 255) ** 2
SSIM_C2 = (0.03 * 255) ** 2


def _box_sums(a: np.ndarray, w: int) -> np.ndarray:
    # integral image; values are integers far below 2**53, so sums are exact
    s = np.zeros((a.shape[0] + 1, a.shape[1] + 1))
    s[1:, 1:] = a.cumsum(0).cumsum(1)
    return s[w:, w:] - s[:-w, w:] - s[w:, :-w] + s[:-w, :-w]


def _ssim_plane(a: np.ndarray, b: np.ndarray) -> float:
    w = SSIM_WINDOW
    n = float(w * w)
    a = a.astype(np.float64)
    b = b.astype(np.float64)
    mu_a = _box_sums(a, w) / n
    mu_b = _box_sums(b, w) / n
    var_a = _box_sums(a * a, w) / n - mu_a * mu_a
    var_b = _box_sums(b * b, w) / n - mu_b * mu_b
    cov = _box_sums(a * b, w) / n - mu_a * mu_b
    num = (2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2)
    den = (mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2)
    return float(np.mean(num / den))


def ssim(a: ImageBuffer, b: ImageBuffer) -> float:
    """Mean SSIM over every 8x8 window (stride 1, uniform weights).

    Colour images are scored per channel and averaged.
    """
    _same_shape(a, b)
    if min(a.width, a.height) < SSIM_WINDOW:
        raise TooSmall(f"SSIM needs both dimensions >= {SSIM_WINDOW}, got {a.width}x{a.height}")
    pa = a.pixels.reshape(a.height, a.width, a.channels)
    pb = b.pixels.reshape(b.height, b.width, b.channels)
    return float(np.mean([_ssim_plane(pa[:, :, c], pb[:, :, c]) for c in range(a.channels)]))


# ---------------------------------------------------------------------------
# noise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseSpec:
    variance: float
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not (self.variance >= 0 and math.isfinite(self.variance)):
            raise ValueError(f"variance must be finite and >= 0, got {self.variance}")


def _uniforms(seed: int, n: int) -> np.ndarray:
    # Philox is counter-based and its stream is fixed across platforms
    return np.random.Generator(np.random.Philox(seed)).random(n)


def _standard_normals(seed: int, n: int) -> np.ndarray:
    """Box-Muller transform of seeded Philox uniforms."""
    m = (n + 1) // 2
    u = _uniforms(seed, 2 * m)
    r = np.sqrt(-2.0 * np.log1p(-u[:m]))  # 1 - u avoids log(0)
    theta = 2.0 * np.pi * u[m:]
    return np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:n]


def add_gaussian_noise(img: ImageBuffer, spec: NoiseSpec) -> ImageBuffer:
    if spec.variance == 0:
        return img
    g = math.sqrt(spec.variance) * _standard_normals(spec.rng_seed, img.size)
    noisy = np.clip(np.rint(img.pixels + g), 0, 255).astype(np.uint8)
    return img.with_pixels(noisy)


def random_image(like: ImageBuffer, rng_seed: int = 0) -> ImageBuffer:
    """Uniform random bytes with the same shape as ``like``."""
    data = np.random.Generator(np.random.Philox(rng_seed)).integers(0, 256, like.size, dtype=np.uint8)
    return like.with_pixels(data)


# ---------------------------------------------------------------------------
# experiment harnesses
# ---------------------------------------------------------------------------

def _psnr_value(a: ImageBuffer, b: ImageBuffer):
    v = psnr(a, b)
    return IDENTICAL_TEXT if v is IDENTICAL else v


def noise_robustness_experiment(
    plain: ImageBuffer,
    key: ChaoticKey,
    mode: CipherMode | str,
    variances: Iterable[float] = (10, 100, 1000),
    rng_seed: int = 0,
) -> AnalysisReport:
    """Encrypt, add Gaussian noise to the ciphertext, decrypt, compare with the plaintext."""
    mode = CipherMode(mode)
    config = derive_config(key, mode.map_id)
    cipher = encrypt_with_config(plain, config)
    rows = []
    for v in sorted(float(v) for v in variances):
        noisy = add_gaussian_noise(cipher, NoiseSpec(v, rng_seed))
        dec = decrypt_with_config(noisy, config)
        rows.append({"variance": v, "mse": mse(plain, dec), "psnr": _psnr_value(plain, dec)})
    baseline = mse(plain, random_image(plain, rng_seed))
    return AnalysisReport(
        "noise_robustness",
        scalars={"random_baseline_mse": baseline},
        rows=rows,
        metadata={"mode": mode.value, "rng_seed": rng_seed, "shape": list(plain.shape)},
    )


def key_sensitivity_experiment(
    plain: ImageBuffer,
    key: ChaoticKey,
    mode: CipherMode | str,
    perturbation: float = 0.01,
    coefficient: str | None = None,
) -> AnalysisReport:
    """Decrypt with the true configuration and with one map coefficient shifted.

    ``coefficient`` defaults to ``a1`` for the 3D map and ``k`` for the 2D map.
    SSIM is omitted for images smaller than the 8x8 window.
    """
    if not perturbation > 0:
        raise ValueError("perturbation must be > 0")
    mode = CipherMode(mode)
    config = derive_config(key, mode.map_id)
    if coefficient is None:
        coefficient = "a1" if mode.map_id is MapId.HYPER3D else "k"
    current = getattr(config.params, coefficient)
    shifted = replace(config, params=replace(config.params, **{coefficient: current + perturbation}))

    cipher = encrypt_with_config(plain, config)
    rows = []
    for label, cfg in (("true", config), ("perturbed", shifted)):
        dec = decrypt_with_config(cipher, cfg)
        score = ssim(plain, dec) if min(plain.width, plain.height) >= SSIM_WINDOW else float("nan")
        row = {"key": label, "mse": mse(plain, dec), "npcr": npcr(plain, dec)}
        if not math.isnan(score):
            row["ssim"] = score
        rows.append(row)
    return AnalysisReport(
        "key_sensitivity",
        rows=rows,
        metadata={
            "mode": mode.value,
            "coefficient": coefficient,
            "perturbation": perturbation,
            "shape": list(plain.shape),
        },
    )


def flip_hex_digit(key: ChaoticKey, position: int) -> ChaoticKey:
    """Return ``key`` with the hex digit at ``position`` incremented mod 16."""
    digits = list(key.hex)
    digits[position] = "0123456789abcdef"[(int(digits[position], 16) + 1) % 16]
    return ChaoticKey("".join(digits))


def differential_experiment(
    plain: ImageBuffer,
    key: ChaoticKey,
    mode: CipherMode | str,
    variant: str = "key",
    position: int | None = None,
    rng_seed: int = 0,
) -> AnalysisReport:
    """NPCR/UACI between two related ciphertexts.

    ``variant="key"``: same plaintext under ``key`` and ``key`` with one hex
    digit changed. ``variant="pixel"``: same key, plaintexts differing in one
    sample (a stream cipher changes only that sample). ``variant="decrypted"``:
    original versus decrypted image, which is identically zero for an exact
    inverse.
    """
    mode = CipherMode(mode)
    rng = np.random.default_rng(rng_seed)
    config = derive_config(key, mode.map_id)
    c1 = encrypt_with_config(plain, config)
    meta = {"mode": mode.value, "variant": variant, "shape": list(plain.shape)}

    if variant == "key":
        pos = int(rng.integers(len(key.hex))) if position is None else position
        other = flip_hex_digit(key, pos)
        a, b = c1, encrypt_with_config(plain, derive_config(other, mode.map_id))
        meta["hex_position"] = pos
    elif variant == "pixel":
        pos = int(rng.integers(plain.size)) if position is None else position
        pixels = plain.pixels.copy()
        pixels[pos] = (int(pixels[pos]) + 1) % 256
        a, b = c1, encrypt_with_config(plain.with_pixels(pixels), config)
        meta["sample_position"] = pos
    elif variant == "decrypted":
        a, b = plain, decrypt_with_config(c1, config)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return AnalysisReport("differential", {"npcr": npcr(a, b), "uaci": uaci(a, b)}, metadata=meta)
