import math

import numpy as np
import pytest

from irisfuse.encoders import (
    Encoder,
    EncoderConfig,
    HaarHilbertParams,
    IrisCode,
    LogGaborParams,
    combined_encode,
    haar_hilbert_encode,
    log_gabor_encode,
    log_gabor_weights,
    phase_bits,
    preprocess,
)
from irisfuse.errors import InvalidInputError


def bilinear_oracle(img, out_h, out_w):
    """Pixel-by-pixel corner-aligned bilinear interpolation."""
    h, w = img.shape
    out = np.empty((out_h, out_w))
    for i in range(out_h):
        y = i * (h - 1) / (out_h - 1)
        y0 = min(int(math.floor(y)), h - 2)
        fy = y - y0
        for j in range(out_w):
            x = j * (w - 1) / (out_w - 1)
            x0 = min(int(math.floor(x)), w - 2)
            fx = x - x0
            out[i, j] = (
                img[y0, x0] * (1 - fy) * (1 - fx)
                + img[y0, x0 + 1] * (1 - fy) * fx
                + img[y0 + 1, x0] * fy * (1 - fx)
                + img[y0 + 1, x0 + 1] * fy * fx
            )
    return out


class TestPreprocess:
    @pytest.mark.parametrize("shape", [(20, 300), (5, 40), (64, 512)])
    def test_constant(self, shape):
        out = preprocess(np.full(shape, 0.5), crop_lines=2)
        assert out.shape == (16, 256)
        np.testing.assert_allclose(out, 0.5, atol=1e-15)

    def test_identity(self, rng):
        seg = rng.uniform(size=(16, 256))
        np.testing.assert_array_equal(preprocess(seg, 0), seg)

    def test_ramp(self):
        ramp = np.tile(np.linspace(0, 1, 300), (20, 1))
        out = preprocess(ramp, 0)
        np.testing.assert_allclose(out, bilinear_oracle(ramp, 16, 256), atol=1e-12)
        assert np.all(np.diff(out.mean(axis=0)) >= 0)

    def test_crop_removes_pupil_rows(self, rng):
        raw = rng.uniform(size=(18, 256))
        raw[0] = 0.0  # pupil-contaminated line
        out = preprocess(raw, 2)
        np.testing.assert_allclose(out, bilinear_oracle(raw[2:], 16, 256), atol=1e-12)

    def test_clamped(self):
        out = preprocess(np.full((16, 256), 1.7), 0)
        assert out.max() == 1.0

    @pytest.mark.parametrize("crop", [5, 6, -1])
    def test_bad_crop(self, crop):
        with pytest.raises(InvalidInputError):
            preprocess(np.zeros((5, 10)), crop)


class TestLogGaborWeights:
    def test_peak_at_center(self):
        p = LogGaborParams(14 / 256, 0.5)
        w = log_gabor_weights(256, p)
        assert w[14] == 1.0
        assert w.argmax() == 14

    def test_log_symmetry(self):
        p = LogGaborParams(16 / 256, 0.55)
        w = log_gabor_weights(256, p)
        for rho in (2, 4):
            assert abs(w[16 * rho] - w[16 // rho]) < 1e-15

    def test_formula_value(self):
        # f0 = 1/18, sigma/f0 = 0.5 at f = 1/9: exp(-0.5 ln^2 2 / ln^2 0.5)
        p = LogGaborParams(1 / 18, 0.5)
        f = 1 / 9
        direct = math.exp(-0.5 * math.log(f / p.center_frequency) ** 2 / math.log(0.5) ** 2)
        assert abs(direct - math.exp(-0.5)) < 1e-15
        assert abs(direct - 0.6065306597) < 1e-10

    def test_dc_and_upper_half_zero(self):
        w = log_gabor_weights(256)
        assert w[0] == 0.0
        assert np.all(w[128:] == 0.0)
        assert np.all(w[1:128] > 0.0)

    @pytest.mark.parametrize("f0,ratio", [(0.0, 0.5), (0.5, 0.5), (0.1, 1.0), (0.1, 0.0)])
    def test_bad_params(self, f0, ratio):
        with pytest.raises(InvalidInputError):
            LogGaborParams(f0, ratio)


class TestLogGaborEncode:
    def test_constant_all_zero(self):
        code = log_gabor_encode(np.full((16, 256), 0.37))
        assert code.shape == (16, 256)
        assert not code.bits.any()

    def test_single_tone(self):
        n = np.arange(256)
        seg = np.tile(0.5 + 0.1 * np.cos(2 * np.pi * 14 * n / 256), (16, 1))
        code = log_gabor_encode(seg, LogGaborParams(14 / 256, 0.5))
        # the response is 0.05*exp(j*2*pi*14n/256): phase in (0, pi] iff 0 < 14n mod 256 <= 128
        expected = np.array([0 < (14 * k) % 256 <= 128 for k in n])
        for row in code.bits:
            np.testing.assert_array_equal(row, expected)

    def test_shift_covariance(self, rng):
        seg = rng.uniform(size=(16, 256))
        base = log_gabor_encode(seg)
        for s in rng.integers(1, 256, size=10):
            shifted = log_gabor_encode(np.roll(seg, s, axis=1))
            np.testing.assert_array_equal(shifted.bits, np.roll(base.bits, s, axis=1))


class TestHaarHilbertEncode:
    def test_constant_all_zero(self):
        code = haar_hilbert_encode(np.full((16, 256), 0.8))
        assert code.shape == (8, 128)
        assert not code.bits.any()

    def test_single_tone_block(self):
        # LL row = 2*x for identical segment rows, so a cos(2*pi*n/16) angular
        # pattern sampled at pairs gives an LL block proportional to cos(2*pi*m/8)
        ll_row = np.cos(2 * np.pi * np.arange(128) / 8)
        seg = np.repeat(np.repeat(ll_row[None, :] / 2, 8, axis=0), 2, axis=1)
        seg = np.repeat(seg, 2, axis=0)[:16] * 0.2 + 0.5
        code = haar_hilbert_encode(seg)
        # phase of exp(j*2*pi*m/8) lies in (0, pi] iff 0 < m mod 8 <= 4
        expected = np.tile([0, 1, 1, 1, 1, 0, 0, 0], 16).astype(bool)
        for row in code.bits:
            np.testing.assert_array_equal(row, expected)

    @pytest.mark.parametrize("block", [4, 8, 16, 32, 64, 128])
    def test_sizes(self, rng, block):
        code = haar_hilbert_encode(rng.uniform(size=(16, 256)), HaarHilbertParams(block))
        assert code.shape == (8, 128)
        assert code.encoder is Encoder.HH

    @pytest.mark.parametrize("block", [0, 2, 3, 6, 12, 256])
    def test_bad_block(self, block):
        with pytest.raises(InvalidInputError):
            HaarHilbertParams(block)


class TestPhaseBits:
    def test_tie_breaks(self):
        resp = np.array([1 + 0j, -1 + 0j, 0j, 1j, -1j, -1 + 1e-20j, 1 - 1e-20j])
        np.testing.assert_array_equal(phase_bits(resp, 1.0), [0, 1, 0, 1, 0, 1, 0])


class TestCombined:
    def test_components(self, rng):
        seg = rng.uniform(size=(16, 256))
        hh, lg = combined_encode(seg)
        assert hh == haar_hilbert_encode(seg)
        assert lg == log_gabor_encode(seg)

    def test_constant(self):
        hh, lg = combined_encode(np.full((16, 256), 0.25))
        assert not hh.bits.any() and not lg.bits.any()

    def test_deterministic(self, rng):
        seg = rng.uniform(size=(16, 256))
        first = combined_encode(seg)
        for _ in range(3):
            again = combined_encode(seg.copy())
            assert all(a.packed() == b.packed() for a, b in zip(first, again))

    def test_config_channels(self, rng):
        seg = rng.uniform(size=(16, 256))
        assert [c.encoder for c in EncoderConfig("combined").encode(seg)] == [Encoder.HH, Encoder.LG]
        assert [c.encoder for c in EncoderConfig("lg").encode(seg)] == [Encoder.LG]
        with pytest.raises(InvalidInputError):
            EncoderConfig("gabor")


class TestSegmentValidation:
    @pytest.mark.parametrize("shape", [(16, 255), (8, 128), (256, 16)])
    def test_wrong_shape(self, shape):
        with pytest.raises(InvalidInputError):
            log_gabor_encode(np.zeros(shape))

    def test_nonfinite(self):
        seg = np.zeros((16, 256))
        seg[3, 4] = np.nan
        with pytest.raises(InvalidInputError):
            haar_hilbert_encode(seg)


def test_random_segments_give_half_similarity():
    rng = np.random.default_rng(7)
    hd = {Encoder.HH: [], Encoder.LG: []}
    for _ in range(200):
        a = combined_encode(rng.uniform(size=(16, 256)))
        b = combined_encode(rng.uniform(size=(16, 256)))
        for x, y in zip(a, b):
            hd[x.encoder].append(np.mean(x.bits != y.bits))
    for enc, values in hd.items():
        assert abs(np.mean(values) - 0.5) <= 0.02, enc


def test_iris_code_shape_validation():
    with pytest.raises(InvalidInputError):
        IrisCode(np.zeros((8, 128), bool), Encoder.LG)
    with pytest.raises(InvalidInputError):
        IrisCode(np.full((8, 128), 2), Encoder.HH)
