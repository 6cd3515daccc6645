import numpy as np
import pytest
from scipy import stats

from chaoscipher.cipher import ImageBuffer, encrypt2
from chaoscipher.errors import InsufficientOrbit, KeystreamMismatch
from chaoscipher.keys import DerivedConfig
from chaoscipher.keystream import (
    Keystream,
    keystream_for_config,
    keystream_from_orbit2,
    keystream_from_orbit3,
    normalize_state,
)
from chaoscipher.keys import derive_config
from chaoscipher.maps import MapId, Mem2DParams, State2, State3, orbit, orbit2, orbit3


def test_normalize_examples():
    assert normalize_state(0.0) == 0.0
    assert normalize_state(1.25) == 0.0
    assert normalize_state(0.1234567891) == pytest.approx(0.7891, abs=1e-9)
    assert normalize_state(-0.1234567891) == pytest.approx(0.7891, abs=1e-9)
    out = normalize_state(np.array([0.0, 1.25]))
    assert isinstance(out, np.ndarray) and not out.any()


def test_byte_extraction_floor():
    # a state whose normalized value is 0.999999
    orb = orbit3(State3(0, 0, 0), burn_in=0, n=1)
    orb.states[0] = [0.999999e-6, 0.0, 0.0]
    ks = keystream_from_orbit3(orb, 1)
    assert normalize_state(0.999999e-6) == pytest.approx(0.999999, abs=1e-9)
    assert ks.kx[0] == 254


def test_zero_state_gives_zero_bytes():
    orb = orbit3(State3(0, 0, 0), burn_in=0, n=1)
    orb.states[0] = 0.0
    ks = keystream_from_orbit3(orb, 1)
    assert (ks.kx[0], ks.ky[0], ks.kz[0]) == (0, 0, 0)


def test_fixed_point_orbit_gives_zero_keystream():
    ks = keystream_from_orbit2(orbit2(State2(0, 0), Mem2DParams(), burn_in=0, n=64), 64)
    assert not ks.kx.any() and not ks.kq.any()


def test_length_contract_for_rgb():
    w, h, c = 3, 4, 3
    ks = keystream_from_orbit2(orbit("2d", n=100), w * h * c)
    assert len(ks) == 36 and len(ks.kq) == 36


def test_insufficient_orbit():
    with pytest.raises(InsufficientOrbit):
        keystream_from_orbit2(orbit("2d", n=10), 11)


def test_components_must_agree():
    with pytest.raises(ValueError):
        Keystream(np.zeros(3, np.uint8), kq=np.zeros(4, np.uint8))


def test_determinism(key):
    for map_id in ("3d", "2d"):
        cfg = derive_config(key, map_id)
        assert keystream_for_config(cfg, 1000) == keystream_for_config(cfg, 1000)


def _stream(map_id, key, n=100_000):
    return keystream_for_config(derive_config(key, map_id), n)


@pytest.mark.parametrize("map_id", ["3d", "2d"])
def test_byte_uniformity(map_id, key):
    # floor(u * 255) never yields 255, so uniformity is over 0..254
    for name, s in _stream(map_id, key).streams().items():
        counts = np.bincount(s, minlength=256)
        assert counts[255] == 0
        counts = counts[:255]
        assert counts.min() > 0, name
        n, p = s.size, 1 / 255
        assert np.abs(counts - n * p).max() < 5 * np.sqrt(n * p * (1 - p)), name
        assert stats.chisquare(counts).pvalue > 0.01, name


def test_memristor_stream_at_175_is_uniform():
    cfg = DerivedConfig(MapId.MEM2D, Mem2DParams(1.75), State2(0.1, 0.1))
    ks = keystream_for_config(cfg, 100_000)
    for s in ks.streams().values():
        counts = np.bincount(s, minlength=255)[:255]
        assert counts.min() > 0
        assert stats.chisquare(counts).pvalue > 0.01


@pytest.mark.parametrize("map_id", ["3d", "2d"])
def test_lag_one_decorrelation(map_id, key):
    for name, s in _stream(map_id, key).streams().items():
        s = s.astype(float)
        assert abs(np.corrcoef(s[:-1], s[1:])[0, 1]) < 0.01, name


def test_cipher_rejects_short_keystream():
    img = ImageBuffer(2, 2, 1, np.zeros(4, np.uint8))
    with pytest.raises(KeystreamMismatch):
        encrypt2(img, Keystream(np.zeros(3, np.uint8), kq=np.zeros(3, np.uint8)))

