import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epsls.errors import InvalidInputError, ParameterError, ResourceError
from epsls.image import GradientField, forward_gradients
from epsls.solver import (SolveParams, WlsParams, difference_otf, ls_solve_dense_oracle,
                          ls_solve_fft, lsgrad_solve_fft, spectral_denominator, wls_solve,
                          wls_system)


def objective(u, g, target, lam):
    gu = forward_gradients(u)
    return float(((u - g) ** 2).sum() + lam * ((gu.gx - target.gx) ** 2 + (gu.gy - target.gy) ** 2).sum())


def test_otf_dc_and_nyquist():
    ox, oy = difference_otf(6, 8)
    assert ox[0, 0] == 0 and oy[0, 0] == 0
    assert abs(ox[0, 4]) ** 2 == pytest.approx(4.0)
    assert abs(oy[3, 0]) ** 2 == pytest.approx(4.0)


def test_otf_convolution_theorem(rng):
    img = rng.random((4, 4))
    ox, oy = difference_otf(4, 4)
    g = forward_gradients(img)
    assert np.abs(np.fft.fft2(g.gx) - ox * np.fft.fft2(img)).max() < 1e-12
    assert np.abs(np.fft.fft2(g.gy) - oy * np.fft.fft2(img)).max() < 1e-12


def test_otf_rejects_degenerate():
    with pytest.raises(ParameterError):
        difference_otf(1, 4)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.integers(2, 40), st.floats(0, 1e6))
def test_denominator_positive(h, w, lam):
    d = spectral_denominator(h, w, lam)
    assert d.min() >= 1.0
    ox, oy = difference_otf(h, w)
    np.testing.assert_allclose(d, 1 + lam * (np.abs(ox) ** 2 + np.abs(oy) ** 2), rtol=1e-12)


def test_lambda_zero_is_identity(rng):
    g = rng.random((17, 13, 3))
    assert np.abs(ls_solve_fft(g, SolveParams(0.0, 0)) - g).max() < 1e-12
    assert np.abs(ls_solve_fft(g, SolveParams(0.0, 16)) - g).max() < 1e-12


@pytest.mark.parametrize("pad", [0, 5])
def test_constant_unchanged(pad):
    g = np.full((9, 12), 0.7)
    assert np.abs(ls_solve_fft(g, SolveParams(50.0, pad)) - 0.7).max() < 1e-12


def test_ls_matches_dense_oracle(rng):
    g = rng.random((16, 16))
    got = ls_solve_fft(g, SolveParams(3.0, 0))
    assert np.abs(got - ls_solve_dense_oracle(g, None, 3.0)).max() < 1e-8


def test_lsgrad_matches_dense_oracle(rng):
    g = rng.random((16, 16))
    t = GradientField(rng.standard_normal((16, 16)), rng.standard_normal((16, 16)))
    got = lsgrad_solve_fft(g, t, SolveParams(7.0, 0))
    assert np.abs(got - ls_solve_dense_oracle(g, t, 7.0)).max() < 1e-8


def test_lsgrad_fixed_point(rng):
    g = rng.random((20, 18, 3))
    for pad in (0, 4, 16):
        out = lsgrad_solve_fft(g, forward_gradients(g), SolveParams(1024.0, pad))
        assert np.abs(out - g).max() < 1e-10


def test_lsgrad_zero_target_is_ls(rng):
    g = rng.random((14, 11))
    zero = GradientField(np.zeros_like(g), np.zeros_like(g))
    p = SolveParams(12.0, 0)
    np.testing.assert_allclose(lsgrad_solve_fft(g, zero, p), ls_solve_fft(g, p), atol=1e-12)


def test_lsgrad_shape_mismatch(rng):
    g = rng.random((8, 8))
    with pytest.raises(InvalidInputError):
        lsgrad_solve_fft(g, GradientField(np.zeros((8, 7)), np.zeros((8, 8))))


def test_energy_decrease(rng):
    for _ in range(10):
        g = rng.random((12, 10))
        t = GradientField(0.3 * rng.standard_normal((12, 10)), 0.3 * rng.standard_normal((12, 10)))
        lam = float(rng.uniform(0.1, 100))
        u = lsgrad_solve_fft(g, t, SolveParams(lam, 0))
        e = objective(u, g, t, lam)
        assert e <= objective(g, g, t, lam) + 1e-9
        assert e <= objective(np.full_like(g, g.mean()), g, t, lam) + 1e-9


def test_dense_oracle_small_cases():
    np.testing.assert_array_equal(ls_solve_dense_oracle(np.zeros((2, 2)), None, 5.0), np.zeros((2, 2)))
    with pytest.raises(ResourceError):
        ls_solve_dense_oracle(np.zeros((65, 64)), None, 1.0)


def test_dense_oracle_sweeps():
    rng = np.random.default_rng(99)
    worst_ls = worst_grad = 0.0
    for _ in range(50):
        g = rng.random((8, 8))
        lam = float(rng.uniform(0.01, 2000))
        t = GradientField(rng.standard_normal((8, 8)), rng.standard_normal((8, 8)))
        worst_ls = max(worst_ls, np.abs(ls_solve_fft(g, SolveParams(lam, 0)) - ls_solve_dense_oracle(g, None, lam)).max())
        worst_grad = max(worst_grad, np.abs(lsgrad_solve_fft(g, t, SolveParams(lam, 0)) - ls_solve_dense_oracle(g, t, lam)).max())
    assert worst_ls < 1e-8 and worst_grad < 1e-8


def test_gradient_attenuation(rng):
    for lam in (1.0, 32.0, 1024.0):
        g = rng.random((24, 20))
        u = ls_solve_fft(g, SolveParams(lam, 0))
        gg, gu = forward_gradients(g), forward_gradients(u)
        assert max(np.abs(gu.gx).max(), np.abs(gu.gy).max()) <= max(np.abs(gg.gx).max(), np.abs(gg.gy).max()) + 1e-9


def test_solve_params_validation():
    with pytest.raises(ParameterError):
        SolveParams(-1.0)
    with pytest.raises(ParameterError):
        SolveParams(float("inf"))
    with pytest.raises(ParameterError):
        SolveParams(1.0, -2)
    with pytest.raises(ParameterError):
        WlsParams(lam=0.0)
    with pytest.raises(ParameterError):
        WlsParams(eps=0.0)


def test_wls_tiny_lambda_is_identity(rng):
    g = rng.random((10, 10, 3))
    assert np.abs(wls_solve(g, WlsParams(1e-12)) - g).max() < 1e-6


def test_wls_constant_exact():
    g = np.full((9, 9), 0.25)
    assert np.abs(wls_solve(g, WlsParams(1.0)) - 0.25).max() < 1e-12


def test_wls_residual(rng):
    g = rng.random((12, 12))
    p = WlsParams(0.8, 1.2, 1e-4)
    u = wls_solve(g, p)
    a = wls_system(g, p)
    assert np.abs(a @ u.ravel() - g.ravel()).max() < 1e-8


def test_wls_system_matches_definition(rng):
    # Assemble I + lam (Dx^T Wx Dx + Dy^T Wy Dy) from explicit open-boundary differences.
    g = rng.random((5, 6))
    p = WlsParams(0.8, 1.2, 1e-4)
    h, w = g.shape
    n = h * w
    log_l = np.log(g + 1e-6)
    rows = []
    weights = []
    for i in range(h):
        for j in range(w):
            for di, dj in ((0, 1), (1, 0)):
                if i + di < h and j + dj < w:
                    d = np.zeros(n)
                    d[i * w + j] = -1
                    d[(i + di) * w + j + dj] = 1
                    rows.append(d)
                    weights.append(1.0 / (abs(log_l[i + di, j + dj] - log_l[i, j]) ** p.alpha + p.eps))
    dm = np.array(rows)
    want = np.eye(n) + p.lam * dm.T @ np.diag(weights) @ dm
    np.testing.assert_allclose(wls_system(g, p).toarray(), want, rtol=1e-12, atol=1e-9)


def test_wls_is_edge_aware():
    g = np.zeros((20, 20))
    g[:, 10:] = 1.0
    g += 0.02 * np.random.default_rng(0).standard_normal(g.shape)
    g = np.clip(g, 0, 1)
    u = wls_solve(g, WlsParams(1.0))
    assert u[:, 12:].mean() - u[:, :8].mean() > 0.9
