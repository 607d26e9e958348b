import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bltv.metrics import SsimConfig, isnr, ssim, ssim_map


def test_isnr_no_change_is_zero(rng):
    u = rng.normal(size=(8, 8))
    g = u + rng.normal(size=(8, 8))
    assert isnr(g, g, u) == 0.0


def test_isnr_ten_db():
    u = np.zeros((1, 4))
    g = np.array([[5.0, 5.0, 5.0, 5.0]])  # |g - u|^2 = 100
    r = np.array([[np.sqrt(10.0), 0.0, 0.0, 0.0]])  # |r - u|^2 = 10
    assert isnr(r, g, u) == pytest.approx(10.0, abs=1e-12)


def test_isnr_sentinels():
    u = np.ones((3, 3))
    assert isnr(u, u + 1, u) == float("inf")
    assert isnr(u + 1, u, u) == float("-inf")


def test_isnr_antisymmetric(rng):
    u = rng.normal(size=(6, 6))
    a, b = u + rng.normal(size=(2, 6, 6))
    assert isnr(a, b, u) == pytest.approx(-isnr(b, a, u), abs=1e-12)


def test_isnr_shape_mismatch():
    with pytest.raises(ValueError):
        isnr(np.zeros((3, 3)), np.zeros((3, 4)), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        isnr(np.zeros((3, 3)), np.zeros((3, 3)), np.zeros((4, 3)))


def test_ssim_identical_is_exactly_one(rng):
    a = rng.uniform(0, 255, size=(32, 40))
    assert ssim(a, a) == 1.0


def test_ssim_offset_below_one(rng):
    a = rng.uniform(0, 55, size=(24, 24))
    assert ssim(a, a + 200.0) < 1.0


def test_ssim_map_shape(rng):
    a = rng.uniform(size=(20, 30))
    assert ssim_map(a, a).shape == (10, 20)


def test_ssim_rejects_small_images():
    with pytest.raises(ValueError):
        ssim(np.zeros((10, 40)), np.zeros((10, 40)))
    with pytest.raises(ValueError):
        SsimConfig(window_size=4)


def test_ssim_window_normalized():
    w = SsimConfig().window()
    assert w.shape == (11, 11)
    assert w.sum() == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), noise=st.floats(0.1, 100.0))
def test_ssim_symmetric_and_bounded(seed, noise):
    r = np.random.default_rng(seed)
    a = r.uniform(0, 255, size=(16, 16))
    b = a + r.normal(scale=noise, size=a.shape)
    s_ab, s_ba = ssim(a, b), ssim(b, a)
    assert abs(s_ab - s_ba) <= 1e-12
    assert -1.0 <= s_ab <= 1.0
