import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from irisfuse.errors import InvalidInputError
from irisfuse.signal_core import (
    HaarDecomposition,
    analytic_signal,
    dft_real,
    haar_dwt2_level1,
    haar_idwt2_level1,
    hilbert,
    idft,
)

from conftest import naive_dft, naive_idft


def _no_dc_nyquist(x):
    X = np.fft.fft(x)
    X[0] = 0
    X[len(x) // 2] = 0
    return np.fft.ifft(X).real


def spectral_hilbert_oracle(x):
    """-j*sgn(k) multiplier applied with the naive DFT pair."""
    n = len(x)
    X = naive_dft(x)
    sgn = np.zeros(n)
    sgn[1 : n // 2] = 1.0
    sgn[n // 2 + 1 :] = -1.0
    return naive_idft(-1j * sgn * X).real


class TestDFT:
    def test_constant(self):
        np.testing.assert_allclose(dft_real([1, 1, 1, 1]), [4, 0, 0, 0], atol=1e-15)

    def test_single_bin_cosine(self):
        np.testing.assert_allclose(dft_real([1, 0, -1, 0]), [0, 2, 0, 2], atol=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 7, 16, 33, 64])
    def test_matches_naive(self, rng, n):
        x = rng.standard_normal(n)
        np.testing.assert_allclose(dft_real(x), naive_dft(x), atol=1e-10, rtol=0)

    @pytest.mark.parametrize("n", [4, 8, 16, 256])
    def test_round_trip(self, rng, n):
        x = rng.standard_normal(n)
        assert np.max(np.abs(idft(dft_real(x)) - x)) < 1e-12

    @pytest.mark.parametrize("n", [4, 8, 16, 256])
    def test_parseval(self, rng, n):
        x = rng.standard_normal(n)
        X = dft_real(x)
        assert abs(np.sum(x**2) - np.sum(np.abs(X) ** 2) / n) < 1e-10

    def test_too_short(self):
        with pytest.raises(InvalidInputError):
            dft_real([1.0])


class TestAnalyticSignal:
    def test_cosine_becomes_complex_exponential(self):
        n = np.arange(8)
        y = analytic_signal(np.cos(2 * np.pi * n / 8))
        np.testing.assert_allclose(y, np.exp(2j * np.pi * n / 8), atol=1e-12)

    def test_constant(self):
        y = analytic_signal(np.full(8, 3.5))
        np.testing.assert_array_equal(y.real, 3.5)
        np.testing.assert_allclose(y.imag, 0.0, atol=1e-15)

    def test_matches_spectral_oracle(self, rng):
        x = rng.standard_normal(8)
        np.testing.assert_allclose(analytic_signal(x).imag, spectral_hilbert_oracle(x), atol=1e-12)

    def test_real_part_exact(self, rng):
        x = rng.standard_normal(64)
        assert np.array_equal(analytic_signal(x).real, x)

    def test_negative_bins_vanish(self, rng):
        x = rng.standard_normal(32)
        Y = np.fft.fft(analytic_signal(x))
        X = np.fft.fft(x)
        assert np.max(np.abs(Y[17:])) < 1e-12
        np.testing.assert_allclose(Y[1:16], 2 * X[1:16], atol=1e-12)
        np.testing.assert_allclose(Y[[0, 16]], X[[0, 16]], atol=1e-12)

    def test_odd_length_rejected(self):
        with pytest.raises(InvalidInputError):
            analytic_signal(np.ones(7))
        with pytest.raises(InvalidInputError):
            hilbert(np.ones(5))

    @settings(max_examples=50, deadline=None)
    @given(
        arrays(np.float64, 16, elements=st.floats(-10, 10)),
        arrays(np.float64, 16, elements=st.floats(-10, 10)),
        st.floats(-5, 5),
        st.floats(-5, 5),
    )
    def test_linearity(self, x, z, a, b):
        lhs = analytic_signal(a * x + b * z)
        rhs = a * analytic_signal(x) + b * analytic_signal(z)
        assert np.max(np.abs(lhs - rhs)) < 1e-10 * max(1.0, np.max(np.abs(x)) + np.max(np.abs(z)))


class TestHilbert:
    @pytest.mark.parametrize("n", [8, 32, 256])
    def test_cos_to_sin(self, n):
        t = np.arange(n)
        for k in range(1, n // 2):
            h = hilbert(np.cos(2 * np.pi * k * t / n))
            assert np.max(np.abs(h - np.sin(2 * np.pi * k * t / n))) < 1e-9

    def test_constant_annihilated(self):
        np.testing.assert_allclose(hilbert(np.full(16, 2.0)), 0.0, atol=1e-15)

    def test_energy_invariance(self, rng):
        x = _no_dc_nyquist(rng.standard_normal(32))
        assert abs(np.sum(hilbert(x) ** 2) / np.sum(x**2) - 1.0) < 1e-9

    @pytest.mark.parametrize("n", [8, 64, 256])
    def test_double_application_negates(self, rng, n):
        x = _no_dc_nyquist(rng.standard_normal(n))
        np.testing.assert_allclose(hilbert(hilbert(x)), -x, atol=1e-9)


class TestHaar:
    def test_constant(self):
        d = haar_dwt2_level1(np.ones((4, 6)))
        np.testing.assert_array_equal(d.ll, 2.0)
        for band in (d.lh, d.hl, d.hh):
            np.testing.assert_array_equal(band, 0.0)

    def test_impulse(self):
        d = haar_dwt2_level1([[1.0, 0.0], [0.0, 0.0]])
        for band in (d.ll, d.lh, d.hl, d.hh):
            np.testing.assert_array_equal(band, [[0.5]])

    def test_band_orientation(self):
        # [a b; c d] = [1 2; 3 4]
        d = haar_dwt2_level1([[1.0, 2.0], [3.0, 4.0]])
        assert d.ll[0, 0] == 5.0
        assert d.lh[0, 0] == -2.0
        assert d.hl[0, 0] == -1.0
        assert d.hh[0, 0] == 0.0

    def test_perfect_reconstruction(self, rng):
        m = rng.standard_normal((16, 256))
        d = haar_dwt2_level1(m)
        assert d.ll.shape == (8, 128)
        # independent inverse: solve each 2x2 block from the four sums
        rec = np.empty_like(m)
        for i in range(8):
            for j in range(128):
                ll, lh, hl, hh = d.ll[i, j], d.lh[i, j], d.hl[i, j], d.hh[i, j]
                rec[2 * i, 2 * j] = (ll + lh + hl + hh) / 2
                rec[2 * i, 2 * j + 1] = (ll + lh - hl - hh) / 2
                rec[2 * i + 1, 2 * j] = (ll - lh + hl - hh) / 2
                rec[2 * i + 1, 2 * j + 1] = (ll - lh - hl + hh) / 2
        assert np.max(np.abs(rec - m)) < 1e-12
        assert np.max(np.abs(haar_idwt2_level1(d) - m)) < 1e-12

    def test_energy_preserved(self, rng):
        m = rng.standard_normal((16, 256))
        d = haar_dwt2_level1(m)
        energy = sum(np.sum(b**2) for b in (d.ll, d.lh, d.hl, d.hh))
        assert abs(energy - np.sum(m**2)) < 1e-12 * np.sum(m**2)

    @pytest.mark.parametrize("shape", [(3, 4), (4, 5), (1, 2), (2,)])
    def test_bad_shapes(self, shape):
        with pytest.raises(InvalidInputError):
            haar_dwt2_level1(np.ones(shape))

    def test_reconstruct_method(self, rng):
        m = rng.standard_normal((4, 8))
        assert isinstance(haar_dwt2_level1(m), HaarDecomposition)
        np.testing.assert_allclose(haar_dwt2_level1(m).reconstruct(), m, atol=1e-12)
