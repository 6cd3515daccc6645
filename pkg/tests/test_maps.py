import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaoscipher.errors import DegenerateTangent, OrbitDiverged
from chaoscipher.maps import (
    Hyper3DParams,
    MapId,
    Mem2DParams,
    State2,
    State3,
    bifurcation_sweep,
    jacobian2,
    jacobian3,
    lyapunov_spectrum,
    orbit,
    orbit2,
    orbit3,
    step2,
    step3,
)

P03 = Hyper3DParams(a1=0.03)


# --- single steps ----------------------------------------------------------

def test_step3_zero_state():
    assert step3(State3(0, 0, 0), P03) == State3(0.0, 4.0, 0.0)


def test_step3_unit_state():
    s = step3(State3(1, 1, 1), P03)
    assert s.x == pytest.approx(0.39, abs=1e-15)
    assert s.y == pytest.approx(2.8, abs=1e-15)
    assert s.z == 2.15


def test_step3_z_is_c_times_x():
    assert step3(State3(1, 0, 0), Hyper3DParams()).z == 2.15


def test_step2_examples():
    assert step2(State2(0.1, 1.0), Mem2DParams(1.75)) == State2(0.0, 1.1)
    s = step2(State2(0.1, 0.5), Mem2DParams(1.75))
    assert s.x == pytest.approx(-0.13125, abs=1e-15)
    assert s.q == pytest.approx(0.6, abs=1e-15)
    for k in (0.3, 1.75, 7.0):
        assert step2(State2(0, 0), Mem2DParams(k)) == State2(0.0, 0.0)


def test_step_divergence_is_reported():
    with pytest.raises(OrbitDiverged):
        step3(State3(1e12, 1e12, 0), Hyper3DParams())
    with pytest.raises(OrbitDiverged):
        orbit3(State3(0.1, 0.1, 0.1), Hyper3DParams(b2=3.0), burn_in=0, n=10_000)


def test_non_finite_values_rejected():
    with pytest.raises(ValueError):
        State2(math.nan, 0.0)
    with pytest.raises(ValueError):
        Hyper3DParams(a1=math.inf)


# --- Jacobians --------------------------------------------------------------

def test_jacobian3_examples():
    p = Hyper3DParams()
    np.testing.assert_array_equal(jacobian3(State3(0.3, 0.0, 0.7), p)[0], [0.05, 0.25, 0.0])
    np.testing.assert_allclose(jacobian3(State3(0.3, 1.0, 0.7), p)[0], [0.05, 0.47, 0.0], atol=1e-15)
    for s in (State3(0, 0, 0), State3(-2, 5, 1)):
        np.testing.assert_array_equal(jacobian3(s, p)[2], [2.15, 0.0, 0.0])


def test_jacobian2_examples():
    p = Mem2DParams(1.75)
    assert jacobian2(State2(0.4, 1.0), p)[0, 0] == 0.0
    assert jacobian2(State2(0.0, 0.3), p)[0, 1] == 0.0
    np.testing.assert_allclose(jacobian2(State2(0.1, 0.5), p), [[-1.3125, 0.175], [1, 1]], atol=1e-15)


def _fd_jacobian(step, state_cls, s, p, h=1e-6):
    base = np.array(s.as_tuple())
    cols = []
    for j in range(base.size):
        e = np.zeros_like(base)
        e[j] = h
        hi = np.array(step(state_cls(*(base + e)), p).as_tuple())
        lo = np.array(step(state_cls(*(base - e)), p).as_tuple())
        cols.append((hi - lo) / (2 * h))
    return np.column_stack(cols)


def test_jacobians_match_finite_differences():
    rng = np.random.default_rng(7)
    p3, p2 = Hyper3DParams(), Mem2DParams(1.75)
    for _ in range(100):
        s3 = State3(*rng.uniform(-3, 3, 3))
        np.testing.assert_allclose(jacobian3(s3, p3), _fd_jacobian(step3, State3, s3, p3), atol=1e-5)
        s2 = State2(*rng.uniform(-1.5, 1.5, 2))
        np.testing.assert_allclose(jacobian2(s2, p2), _fd_jacobian(step2, State2, s2, p2), atol=1e-5)


# --- orbits -----------------------------------------------------------------

def test_orbit_single_step_from_zero():
    orb = orbit3(State3(0, 0, 0), P03, burn_in=0, n=1)
    assert len(orb) == 1
    assert orb[0] == State3(0.0, 4.0, 0.0)


def test_orbit2_fixed_point():
    orb = orbit2(State2(0, 0), Mem2DParams(1.75), burn_in=5, n=50)
    assert not orb.states.any()


@pytest.mark.parametrize("map_id", list(MapId))
def test_long_orbits_stay_bounded(map_id):
    orb = orbit(map_id, n=100_000)
    assert np.isfinite(orb.states).all()
    assert np.abs(orb.states).max() < 100


@pytest.mark.parametrize("map_id", list(MapId))
def test_orbit_determinism(map_id):
    assert orbit(map_id, n=500) == orbit(map_id, n=500)


@settings(max_examples=30, deadline=None)
@given(b=st.integers(0, 300), n=st.integers(1, 300), map_id=st.sampled_from(list(MapId)))
def test_burn_in_composition(b, n, map_id):
    later = orbit(map_id, burn_in=b, n=n)
    full = orbit(map_id, burn_in=0, n=b + n)
    np.testing.assert_array_equal(later.states, full.states[b:])


def test_orbit_rejects_bad_counts():
    with pytest.raises(ValueError):
        orbit("2d", n=0)
    with pytest.raises(ValueError):
        orbit("3d", burn_in=-1)


def test_orbit_serialization():
    orb = orbit("2d", n=5)
    lines = orb.to_csv().splitlines()
    assert lines[0] == "n,x,q"
    assert len(lines) == 6
    assert [float(v) for v in lines[3].split(",")[1:]] == list(orb.states[2])
    doc = json.loads(orb.to_json())
    assert doc["map"] == "2d" and doc["columns"] == ["x", "q"]
    np.testing.assert_array_equal(np.array(doc["states"]), orb.states)


# --- Lyapunov spectra --------------------------------------------------------

def _qr_oracle(map_id, params, n, burn_in=1000):
    """Independent estimate: numpy QR on the accumulated tangent frame each step."""
    step, jac, cls = (step3, jacobian3, State3) if map_id is MapId.HYPER3D else (step2, jacobian2, State2)
    s = orbit(map_id, params, burn_in=burn_in - 1, n=1)[0]
    q = np.eye(len(s.as_tuple()))
    sums = np.zeros(q.shape[0])
    for _ in range(n):
        j = jac(s, params)
        s = step(s, params)
        q, r = np.linalg.qr(j @ q)
        sums += np.log(np.abs(np.diag(r)))
    return np.sort(sums / n)[::-1]


@pytest.mark.parametrize("map_id,params", [(MapId.MEM2D, Mem2DParams(1.75)), (MapId.HYPER3D, Hyper3DParams())])
def test_spectrum_matches_numpy_qr(map_id, params):
    ours = lyapunov_spectrum(map_id, params, n=3000).exponents
    np.testing.assert_allclose(ours, _qr_oracle(map_id, params, 3000), atol=1e-9)


def test_memristor_spectrum_at_small_k():
    # x = 0 is a line of fixed points, so one exponent is neutral in the limit
    lam = lyapunov_spectrum("2d", Mem2DParams(0.5), n=20_000).exponents
    assert lam[0] < 1e-3
    assert lam[1] < 0


def test_memristor_hyperchaos_at_175():
    lam = lyapunov_spectrum("2d", Mem2DParams(1.75)).exponents
    assert lam[0] > 0 and lam[1] > 0


@pytest.mark.parametrize(
    "map_id,seeds",
    [
        (MapId.MEM2D, [(0.1, 0.1), (0.2, 0.3), (0.15, 0.45)]),
        (MapId.HYPER3D, [(0.1, 0.1, 0.1), (0.5, 0.5, 0.5), (0.3, 0.7, 0.2)]),
    ],
)
def test_spectrum_seed_invariance(map_id, seeds):
    spectra = np.array([lyapunov_spectrum(map_id, seed=s).exponents for s in seeds])
    assert np.ptp(spectra, axis=0).max() < 0.02


@pytest.mark.parametrize("map_id", list(MapId))
def test_renorm_interval_invariance(map_id):
    one = np.array(lyapunov_spectrum(map_id, renorm_interval=1).exponents)
    two = np.array(lyapunov_spectrum(map_id, renorm_interval=2).exponents)
    assert np.abs(one - two).max() < 0.005


def test_degenerate_tangent():
    # with b2 = c = 0 the Jacobian has rank one
    p = Hyper3DParams(b2=0.0, c=0.0)
    with pytest.raises(DegenerateTangent):
        lyapunov_spectrum("3d", p, n=10)


def test_spectrum_serialization():
    spectrum = lyapunov_spectrum("2d", n=100)
    doc = json.loads(spectrum.to_json())
    assert tuple(doc["exponents"]) == spectrum.exponents
    assert spectrum.to_csv().splitlines()[0].startswith("index")


# --- bifurcation sweeps -----------------------------------------------------

def test_sweep_two_steps_two_rows():
    sweep = bifurcation_sweep("2d", None, "k", (1.0, 1.8), steps=2)
    assert len(sweep) == 2
    assert len(json.loads(sweep.to_json())["rows"]) == 2


def test_sweep_small_k_single_branch():
    sweep = bifurcation_sweep("2d", None, "k", (0.2, 1.0), steps=5, samples_per_value=50)
    assert not sweep.diverged.any()
    for row in sweep.samples:
        assert np.ptp(row) < 1e-9


def test_sweep_period_four_window():
    sweep = bifurcation_sweep("2d", None, "k", (1.6, 1.76), steps=2, burn_in=20_000, samples_per_value=200)
    period4, chaotic = sweep.samples
    assert len(np.unique(np.round(period4, 6))) == 4
    assert len(np.unique(np.round(chaotic, 6))) > 100


def test_sweep_flags_divergence_and_keeps_order():
    sweep = bifurcation_sweep("3d", None, "b2", (1.0, 3.0), steps=5, samples_per_value=20)
    assert sweep.diverged[-1]
    assert not sweep.diverged[0]
    assert np.isnan(sweep.samples[-1]).all()
    assert np.all(np.diff(sweep.values) > 0)
    rows = sweep.to_csv().splitlines()
    assert rows[0] == "b2,sample,x,diverged"
    assert rows[-1].endswith(",,,1")


def test_sweep_rejects_bad_arguments():
    with pytest.raises(ValueError):
        bifurcation_sweep("2d", None, "k", (1.8, 1.0), steps=4)
    with pytest.raises(ValueError):
        bifurcation_sweep("2d", None, "a1", (1.0, 1.8), steps=4)
    with pytest.raises(ValueError):
        bifurcation_sweep("2d", None, "k", (1.0, 1.8), steps=1)
