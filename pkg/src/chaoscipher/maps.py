"""Discrete chaotic maps driving the cipher, plus their dynamical diagnostics.

Two maps are provided:

* a 3D hyperchaotic map::

      x' = a1*x + a2*y + a3*y**2
      y' = b1 - b2*z
      z' = c*x

* a 2D quadratic memristor map::

      x' = k*(q**2 - 1)*x
      q' = q + x

Orbits, Lyapunov spectra and bifurcation sweeps are pure functions of their
arguments; identical inputs give bit-identical outputs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateTangent, OrbitDiverged

__all__ = [
    "MapId",
    "Hyper3DParams",
    "Mem2DParams",
    "State3",
    "State2",
    "Orbit",
    "LyapunovSpectrum",
    "BifurcationSweep",
    "DIVERGENCE_LIMIT",
    "DEFAULT_BURN_IN",
    "DEFAULT_SEED3",
    "DEFAULT_SEED2",
    "step3",
    "step2",
    "jacobian3",
    "jacobian2",
    "orbit3",
    "orbit2",
    "orbit",
    "lyapunov_spectrum",
    "bifurcation_sweep",
]

DIVERGENCE_LIMIT = 1e12
DEFAULT_BURN_IN = 1000


class MapId(str, Enum):
    HYPER3D = "3d"
    MEM2D = "2d"


def _require_finite(owner: object) -> None:
    for f in fields(owner):  # type: ignore[arg-type]
        value = getattr(owner, f.name)
        if not math.isfinite(value):
            raise ValueError(f"{type(owner).__name__}.{f.name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Hyper3DParams:
    """Coefficients of the 3D map. Defaults are the encryption configuration."""

    a1: float = 0.05
    a2: float = 0.25
    a3: float = 0.11
    b1: float = 4.0
    b2: float = 1.2
    c: float = 2.15

    def __post_init__(self) -> None:
        _require_finite(self)


@dataclass(frozen=True)
class Mem2DParams:
    k: float = 1.75

    def __post_init__(self) -> None:
        _require_finite(self)


@dataclass(frozen=True)
class State3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        _require_finite(self)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class State2:
    x: float
    q: float

    def __post_init__(self) -> None:
        _require_finite(self)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.q)


Params = Union[Hyper3DParams, Mem2DParams]
State = Union[State3, State2]

DEFAULT_SEED3 = State3(0.1, 0.1, 0.1)
DEFAULT_SEED2 = State2(0.1, 0.1)


def _bounded(*values: float) -> bool:
    # NaN fails every comparison, so it is rejected here as well
    return all(abs(v) <= DIVERGENCE_LIMIT for v in values)


# ---------------------------------------------------------------------------
# single steps and Jacobians
# ---------------------------------------------------------------------------

def step3(s: State3, p: Hyper3DParams) -> State3:
    x, y, z = s.x, s.y, s.z
    nx = p.a1 * x + p.a2 * y + p.a3 * y * y
    ny = p.b1 - p.b2 * z
    nz = p.c * x
    if not _bounded(nx, ny, nz):
        raise OrbitDiverged(1, (nx, ny, nz))
    return State3(nx, ny, nz)


def step2(s: State2, p: Mem2DParams) -> State2:
    x, q = s.x, s.q
    nx = p.k * (q * q - 1.0) * x
    nq = q + x
    if not _bounded(nx, nq):
        raise OrbitDiverged(1, (nx, nq))
    return State2(nx, nq)


def jacobian3(s: State3, p: Hyper3DParams) -> np.ndarray:
    return np.array(
        [
            [p.a1, p.a2 + 2.0 * p.a3 * s.y, 0.0],
            [0.0, 0.0, -p.b2],
            [p.c, 0.0, 0.0],
        ]
    )


def jacobian2(s: State2, p: Mem2DParams) -> np.ndarray:
    return np.array(
        [
            [p.k * (s.q * s.q - 1.0), 2.0 * p.k * s.q * s.x],
            [1.0, 1.0],
        ]
    )


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Orbit:
    """Recorded states of a map after discarding ``burn_in`` transient steps.

    ``states`` has shape ``(n, dim)``; its columns are named by ``columns``.
    """

    states: np.ndarray
    params: Params
    seed_state: State
    burn_in: int

    @property
    def map_id(self) -> MapId:
        return MapId.HYPER3D if isinstance(self.params, Hyper3DParams) else MapId.MEM2D

    @property
    def columns(self) -> tuple[str, ...]:
        return ("x", "y", "z") if self.map_id is MapId.HYPER3D else ("x", "q")

    def __len__(self) -> int:
        return self.states.shape[0]

    def __getitem__(self, i: int) -> State:
        row = self.states[i]
        if self.map_id is MapId.HYPER3D:
            return State3(float(row[0]), float(row[1]), float(row[2]))
        return State2(float(row[0]), float(row[1]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Orbit):
            return NotImplemented
        return (
            self.params == other.params
            and self.seed_state == other.seed_state
            and self.burn_in == other.burn_in
            and np.array_equal(self.states, other.states)
        )

    def component(self, name: str) -> np.ndarray:
        return self.states[:, self.columns.index(name)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("n",) + self.columns)
        for i, row in enumerate(self.states.tolist()):
            writer.writerow([i] + [repr(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "map": self.map_id.value,
            "params": asdict(self.params),
            "seed_state": asdict(self.seed_state),
            "burn_in": self.burn_in,
            "columns": list(self.columns),
            "states": self.states.tolist(),
        }
        return json.dumps(doc, sort_keys=True)


def _check_counts(burn_in: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")


def orbit3(
    seed: State3 = DEFAULT_SEED3,
    p: Hyper3DParams = Hyper3DParams(),
    burn_in: int = DEFAULT_BURN_IN,
    n: int = 1,
) -> Orbit:
    _check_counts(burn_in, n)
    a1, a2, a3, b1, b2, c = p.a1, p.a2, p.a3, p.b1, p.b2, p.c
    lim = DIVERGENCE_LIMIT
    x, y, z = seed.x, seed.y, seed.z
    out = np.empty((n, 3))
    for i in range(burn_in + n):
        x, y, z = a1 * x + a2 * y + a3 * y * y, b1 - b2 * z, c * x
        if not (abs(x) <= lim and abs(y) <= lim and abs(z) <= lim):
            raise OrbitDiverged(i + 1, (x, y, z))
        if i >= burn_in:
            out[i - burn_in] = (x, y, z)
    return Orbit(out, p, seed, burn_in)


def orbit2(
    seed: State2 = DEFAULT_SEED2,
    p: Mem2DParams = Mem2DParams(),
    burn_in: int = DEFAULT_BURN_IN,
    n: int = 1,
) -> Orbit:
    _check_counts(burn_in, n)
    k = p.k
    lim = DIVERGENCE_LIMIT
    x, q = seed.x, seed.q
    out = np.empty((n, 2))
    for i in range(burn_in + n):
        x, q = k * (q * q - 1.0) * x, q + x
        if not (abs(x) <= lim and abs(q) <= lim):
            raise OrbitDiverged(i + 1, (x, q))
        if i >= burn_in:
            out[i - burn_in] = (x, q)
    return Orbit(out, p, seed, burn_in)


def _params_for(map_id: MapId | str, params: Params | None) -> Params:
    map_id = MapId(map_id)
    if params is None:
        return Hyper3DParams() if map_id is MapId.HYPER3D else Mem2DParams()
    expected = Hyper3DParams if map_id is MapId.HYPER3D else Mem2DParams
    if not isinstance(params, expected):
        raise TypeError(f"map {map_id.value} expects {expected.__name__}, got {type(params).__name__}")
    return params


def _seed_for(map_id: MapId, seed: State | Sequence[float] | None) -> State:
    if seed is None:
        return DEFAULT_SEED3 if map_id is MapId.HYPER3D else DEFAULT_SEED2
    if isinstance(seed, (State3, State2)):
        expected = State3 if map_id is MapId.HYPER3D else State2
        if not isinstance(seed, expected):
            raise TypeError(f"map {map_id.value} expects {expected.__name__} seed")
        return seed
    return State3(*seed) if map_id is MapId.HYPER3D else State2(*seed)


def orbit(
    map_id: MapId | str,
    params: Params | None = None,
    seed: State | Sequence[float] | None = None,
    burn_in: int = DEFAULT_BURN_IN,
    n: int = 1,
) -> Orbit:
    """Dispatch to :func:`orbit3` or :func:`orbit2` by map identifier."""
    map_id = MapId(map_id)
    params = _params_for(map_id, params)
    seed = _seed_for(map_id, seed)
    if map_id is MapId.HYPER3D:
        return orbit3(seed, params, burn_in, n)  # type: ignore[arg-type]
    return orbit2(seed, params, burn_in, n)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Lyapunov spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LyapunovSpectrum:
    exponents: tuple[float, ...]
    iterations: int
    renorm_interval: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "exponents": list(self.exponents),
                "iterations": self.iterations,
                "renorm_interval": self.renorm_interval,
            },
            sort_keys=True,
        )

    def to_csv(self) -> str:
        lines = ["index,exponent,iterations,renorm_interval"]
        lines += [
            f"{i},{e!r},{self.iterations},{self.renorm_interval}"
            for i, e in enumerate(self.exponents)
        ]
        return "\n".join(lines) + "\n"


def _step_jac3(p: Hyper3DParams):
    a1, a2, a3, b1, b2, c = p.a1, p.a2, p.a3, p.b1, p.b2, p.c

    def advance(s):
        x, y, z = s
        jac = ((a1, a2 + 2.0 * a3 * y, 0.0), (0.0, 0.0, -b2), (c, 0.0, 0.0))
        return (a1 * x + a2 * y + a3 * y * y, b1 - b2 * z, c * x), jac

    return advance


def _step_jac2(p: Mem2DParams):
    k = p.k

    def advance(s):
        x, q = s
        jac = ((k * (q * q - 1.0), 2.0 * k * q * x), (1.0, 1.0))
        return (k * (q * q - 1.0) * x, q + x), jac

    return advance


def lyapunov_spectrum(
    map_id: MapId | str,
    params: Params | None = None,
    seed: State | Sequence[float] | None = None,
    burn_in: int = DEFAULT_BURN_IN,
    n: int = 100_000,
    renorm_interval: int = 1,
) -> LyapunovSpectrum:
    """Estimate the full Lyapunov spectrum with a tangent-map/QR scheme.

    An orthonormal frame is pushed forward by the Jacobian along the orbit and
    re-orthonormalized by modified Gram-Schmidt every ``renorm_interval``
    steps. The log of each column norm (the diagonal of R) is accumulated and
    divided by ``n``.

    Raises:
        OrbitDiverged: the orbit left the bounded region.
        DegenerateTangent: a stretch factor collapsed to zero or overflowed.
    """
    map_id = MapId(map_id)
    params = _params_for(map_id, params)
    seed = _seed_for(map_id, seed)
    if renorm_interval < 1:
        raise ValueError(f"renorm_interval must be >= 1, got {renorm_interval}")
    if n < 1 or burn_in < 0:
        raise ValueError("n must be >= 1 and burn_in >= 0")

    # state after exactly burn_in steps
    start = orbit(map_id, params, seed, burn_in - 1, 1)[0] if burn_in else seed

    advance = _step_jac3(params) if map_id is MapId.HYPER3D else _step_jac2(params)  # type: ignore[arg-type]
    dim = 3 if map_id is MapId.HYPER3D else 2
    lim = DIVERGENCE_LIMIT

    s = start.as_tuple()
    # frame[j] is the j-th tangent column vector
    frame = [[1.0 if r == j else 0.0 for r in range(dim)] for j in range(dim)]
    sums = [0.0] * dim
    rng_dim = range(dim)

    for it in range(1, n + 1):
        s, jac = advance(s)
        if not all(abs(v) <= lim for v in s):
            raise OrbitDiverged(burn_in + it, tuple(s))
        frame = [[sum(jac[r][m] * col[m] for m in rng_dim) for r in rng_dim] for col in frame]
        if it % renorm_interval == 0 or it == n:
            _gram_schmidt(frame, sums)

    exps = sorted((v / n for v in sums), reverse=True)
    return LyapunovSpectrum(tuple(exps), n, renorm_interval)


def _gram_schmidt(frame: list[list[float]], sums: list[float]) -> None:
    """Orthonormalize ``frame`` in place, adding log column norms to ``sums``."""
    for j, v in enumerate(frame):
        for i in range(j):
            u = frame[i]
            proj = sum(a * b for a, b in zip(u, v))
            v = [b - proj * a for a, b in zip(u, v)]
        norm = math.sqrt(sum(a * a for a in v))
        if not (norm > 0.0 and math.isfinite(norm)):
            raise DegenerateTangent(f"stretch factor {norm!r} for tangent vector {j}")
        sums[j] += math.log(norm)
        frame[j] = [a / norm for a in v]


# ---------------------------------------------------------------------------
# bifurcation sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BifurcationSweep:
    """Long-run samples of one state component across a parameter range.

    ``samples[i]`` holds the values recorded at ``values[i]``; rows whose orbit
    diverged are NaN-filled and flagged in ``diverged``.
    """

    map_id: MapId
    param_name: str
    component: str
    values: np.ndarray
    samples: np.ndarray
    diverged: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow((self.param_name, "sample", self.component, "diverged"))
        for p, row, bad in zip(self.values.tolist(), self.samples.tolist(), self.diverged.tolist()):
            if bad:
                writer.writerow((repr(p), "", "", 1))
                continue
            for j, v in enumerate(row):
                writer.writerow((repr(p), j, repr(v), 0))
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [
            {"param": p, "samples": [] if bad else row, "diverged": bad}
            for p, row, bad in zip(self.values.tolist(), self.samples.tolist(), self.diverged.tolist())
        ]
        doc = {
            "map": self.map_id.value,
            "param_name": self.param_name,
            "component": self.component,
            "rows": rows,
        }
        return json.dumps(doc, sort_keys=True)


def bifurcation_sweep(
    map_id: MapId | str,
    base_params: Params | None,
    sweep_param_name: str,
    value_range: tuple[float, float],
    steps: int,
    seed: State | Sequence[float] | None = None,
    burn_in: int = 2000,
    samples_per_value: int = 200,
    component: str = "x",
) -> BifurcationSweep:
    map_id = MapId(map_id)
    base = _params_for(map_id, base_params)
    seed = _seed_for(map_id, seed)
    lo, hi = value_range
    if not lo < hi:
        raise ValueError(f"range must satisfy lo < hi, got {value_range}")
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if sweep_param_name not in {f.name for f in fields(base)}:
        raise ValueError(f"{type(base).__name__} has no parameter {sweep_param_name!r}")

    values = np.linspace(lo, hi, steps)
    samples = np.full((steps, samples_per_value), np.nan)
    diverged = np.zeros(steps, dtype=bool)
    for i, v in enumerate(values):
        p = replace(base, **{sweep_param_name: float(v)})
        try:
            orb = orbit(map_id, p, seed, burn_in, samples_per_value)
        except OrbitDiverged:
            diverged[i] = True
            continue
        samples[i] = orb.component(component)
    return BifurcationSweep(map_id, sweep_param_name, component, values, samples, diverged)
