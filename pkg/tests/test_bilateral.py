import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epsls.bilateral import GridParams, RangeSpatialParams, blf_brute, blf_grid
from epsls.errors import InvalidInputError, ParameterError
from epsls.image import gaussian_blur
from epsls.metrics import psnr


def direct_bilateral(src, guide, sigma_s, sigma_r):
    """Scalar loop over the bilateral sum; clipped square window of radius ceil(3 sigma_s)."""
    h, w = len(src), len(src[0])
    r = math.ceil(3 * sigma_s)
    out = [[0.0] * w for _ in range(h)]
    for i in range(h):
        for j in range(w):
            num = den = 0.0
            for k in range(max(0, i - r), min(h, i + r + 1)):
                for m in range(max(0, j - r), min(w, j + r + 1)):
                    ws = math.exp(-((i - k) ** 2 + (j - m) ** 2) / (2 * sigma_s ** 2))
                    wr = math.exp(-((guide[i][j] - guide[k][m]) ** 2) / (2 * sigma_r ** 2))
                    num += ws * wr * src[k][m]
                    den += ws * wr
            out[i][j] = num / den
    return np.array(out)


def step_image(n=5):
    img = np.full((n, n), 0.2)
    img[:, n // 2:] = 0.8
    return img + 0.01 * np.arange(n)[:, None]


def test_brute_matches_direct_sum():
    img = step_image()
    got = blf_brute(img, img, RangeSpatialParams(2.0, 0.1))
    want = direct_bilateral(img.tolist(), img.tolist(), 2.0, 0.1)
    assert np.abs(got - want).max() < 1e-12


def test_brute_joint_matches_direct_sum(rng):
    src = rng.random((5, 6))
    guide = rng.random((5, 6))
    got = blf_brute(src, guide, RangeSpatialParams(1.5, 0.2))
    want = direct_bilateral(src.tolist(), guide.tolist(), 1.5, 0.2)
    assert np.abs(got - want).max() < 1e-12


@pytest.mark.parametrize("fn", [blf_brute, blf_grid])
def test_constant_source_fixed_point(fn, rng):
    src = np.full((24, 20), 0.37)
    guide = rng.random((24, 20))
    out = fn(src, guide, RangeSpatialParams(3.0, 0.1))
    assert np.abs(out - 0.37).max() < 1e-6


def test_brute_large_range_is_gaussian(rng):
    img = rng.random((30, 30))
    out = blf_brute(img, img, RangeSpatialParams(2.0, 1e6))
    # Gaussian with zero-weight (not replicated) borders, computed independently.
    k = np.exp(-0.5 * (np.arange(-6, 7) / 2.0) ** 2)
    num = np.apply_along_axis(np.convolve, 1, np.pad(img, 6), k, "valid")
    num = np.apply_along_axis(np.convolve, 0, num, k, "valid")
    ones = np.pad(np.ones_like(img), 6)
    den = np.apply_along_axis(np.convolve, 1, ones, k, "valid")
    den = np.apply_along_axis(np.convolve, 0, den, k, "valid")
    assert np.abs(out - num / den).max() < 1e-4
    # Interior pixels agree with the plain replicate-boundary blur too.
    interior = slice(7, -7)
    assert np.abs(out[interior, interior] - gaussian_blur(img, 2.0)[interior, interior]).max() < 1e-4


@pytest.mark.parametrize("fn", [blf_brute, blf_grid])
def test_sigma_r_limit_converges_to_gaussian(fn, crop128):
    img = crop128[32:96, 32:96]
    out = fn(img, img, RangeSpatialParams(4.0, 100.0))
    ref = blf_brute(img, img, RangeSpatialParams(4.0, 1e9))
    assert np.abs(out - ref).max() < 1e-3 if fn is blf_brute else psnr(out, ref) > 40


@pytest.mark.parametrize("fn", [blf_brute, blf_grid])
def test_output_within_source_range(fn, rng):
    src = rng.random((32, 32))
    out = fn(src, src, RangeSpatialParams(3.0, 0.1))
    assert out.min() >= src.min() - 1e-12 and out.max() <= src.max() + 1e-12


def test_mirror_symmetry(rng):
    # Exact only for the symmetric clipped window; the grid is anchored at pixel 0.
    src = rng.random((20, 27))
    guide = rng.random((20, 27))
    p = RangeSpatialParams(2.5, 0.15)
    a = blf_brute(src[:, ::-1], guide[:, ::-1], p)
    b = blf_brute(src, guide, p)[:, ::-1]
    assert np.abs(a - b).max() < 1e-12


@pytest.mark.parametrize("params", [(4, 0.05), (8, 0.1), (12, 0.3), (16, 0.2)])
def test_grid_fidelity(crop128, params):
    p = RangeSpatialParams(*params)
    assert psnr(blf_grid(crop128, crop128, p), blf_brute(crop128, crop128, p)) >= 40.0


def test_grid_finer_sampling_is_closer(crop128):
    p = RangeSpatialParams(8.0, 0.1)
    ref = blf_brute(crop128, crop128, p)
    coarse = psnr(blf_grid(crop128, crop128, p), ref)
    fine = psnr(blf_grid(crop128, crop128, p, GridParams(4.0, 0.05)), ref)
    assert fine > coarse


def test_grid_multichannel_source_scalar_guide(rng):
    src = rng.random((16, 16, 3))
    guide = rng.random((16, 16))
    out = blf_grid(src, guide, RangeSpatialParams(2.0, 0.2))
    assert out.shape == src.shape
    for c in range(3):
        np.testing.assert_allclose(out[:, :, c], blf_grid(src[:, :, c], guide, RangeSpatialParams(2.0, 0.2)))


def test_brute_color_guide_uses_joint_distance(rng):
    src = rng.random((6, 6, 3))
    out = blf_brute(src, src, RangeSpatialParams(1.0, 0.3))
    assert out.shape == src.shape


def test_errors(rng):
    a = rng.random((8, 8))
    with pytest.raises(InvalidInputError):
        blf_brute(a, rng.random((8, 9)), RangeSpatialParams(1, 0.1))
    with pytest.raises(InvalidInputError):
        blf_grid(rng.random((8, 8, 3)), rng.random((8, 8, 3)), RangeSpatialParams(1, 0.1))
    with pytest.raises(ParameterError):
        RangeSpatialParams(0, 0.1)
    with pytest.raises(ParameterError):
        RangeSpatialParams(1, -0.1)
    with pytest.raises(ParameterError):
        GridParams(spatial_sampling=0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.5, 4.0), st.floats(0.02, 2.0), st.integers(0, 2 ** 31 - 1))
def test_convex_combination_property(sigma_s, sigma_r, seed):
    r = np.random.default_rng(seed)
    src = r.random((12, 12))
    guide = r.random((12, 12))
    for fn in (blf_brute, blf_grid):
        out = fn(src, guide, RangeSpatialParams(sigma_s, sigma_r))
        assert out.min() >= src.min() - 1e-9 and out.max() <= src.max() + 1e-9
