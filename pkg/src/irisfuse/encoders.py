"""Iris texture encoders: Log-Gabor, Haar-Hilbert and their combination.

Every encoder emits one bit per complex sample: 1 when the principal phase lies
in (0, pi], 0 otherwise.  Responses whose imaginary part is indistinguishable
from round-off are treated as exactly real so degenerate inputs (constant rows,
pure tones sampled at zero crossings) code deterministically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .signal_core import analytic_multiplier, haar_dwt2_level1

SEGMENT_SHAPE = (16, 256)

# relative to the magnitude of the encoded input row/block
_ROUNDOFF = 1e-10


class Encoder(str, enum.Enum):
    HH = "HH"
    LG = "LG"

    @property
    def code_shape(self) -> tuple[int, int]:
        return (8, 128) if self is Encoder.HH else (16, 256)


@dataclass(frozen=True)
class IrisCode:
    bits: np.ndarray
    encoder: Encoder

    def __post_init__(self):
        bits = np.asarray(self.bits)
        enc = Encoder(self.encoder)
        if bits.shape != enc.code_shape:
            raise InvalidInputError(f"{enc.value} code must be {enc.code_shape}, got {bits.shape}")
        if bits.dtype != np.bool_:
            if not np.isin(bits, (0, 1)).all():
                raise InvalidInputError("iris code bits must be 0/1")
            bits = bits.astype(bool)
        bits = np.ascontiguousarray(bits)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "encoder", enc)

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    def packed(self) -> bytes:
        """Row-major bits, MSB first, each row padded to a byte boundary."""
        return np.packbits(self.bits, axis=1).tobytes()

    def __eq__(self, other):
        if not isinstance(other, IrisCode):
            return NotImplemented
        return self.encoder is other.encoder and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.encoder, self.packed()))


@dataclass(frozen=True)
class LogGaborParams:
    center_frequency: float = 1.0 / 18.0
    bandwidth_ratio: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.center_frequency < 0.5:
            raise InvalidInputError(f"center frequency must lie in (0, 0.5), got {self.center_frequency}")
        if not 0.0 < self.bandwidth_ratio < 1.0:
            raise InvalidInputError(f"bandwidth ratio must lie in (0, 1), got {self.bandwidth_ratio}")


@dataclass(frozen=True)
class HaarHilbertParams:
    block_size: int = 8

    def __post_init__(self):
        b = self.block_size
        if b < 4 or 128 % b:
            raise InvalidInputError(f"block size must divide 128 and be >= 4, got {b}")


def validate_segment(seg) -> np.ndarray:
    seg = np.asarray(seg, dtype=np.float64)
    if seg.shape != SEGMENT_SHAPE:
        raise InvalidInputError(f"normalized segment must be {SEGMENT_SHAPE}, got {seg.shape}")
    if not np.isfinite(seg).all():
        raise InvalidInputError("normalized segment contains non-finite values")
    return seg


def _bilinear_axis(n_in: int, n_out: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if n_in == 1:
        zeros = np.zeros(n_out, dtype=np.intp)
        return zeros, zeros, np.zeros(n_out)
    pos = np.arange(n_out) * ((n_in - 1) / (n_out - 1))
    lo = np.minimum(np.floor(pos).astype(np.intp), n_in - 2)
    return lo, lo + 1, pos - lo


def preprocess(raw, crop_lines: int = 1) -> np.ndarray:
    """Drop ``crop_lines`` pupil-side rows (row 0 borders the pupil) and resample to 16x256.

    Resampling is bilinear with corner-aligned grids; output is clamped to [0, 1].
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 2:
        raise InvalidInputError(f"expected a 2-D unwrapped segment, got shape {raw.shape}")
    h, w = raw.shape
    if crop_lines < 0 or crop_lines >= h:
        raise InvalidInputError(f"crop_lines must be in [0, {h}), got {crop_lines}")
    if w < 2:
        raise InvalidInputError("unwrapped segment needs at least 2 columns")
    if not np.isfinite(raw).all():
        raise InvalidInputError("unwrapped segment contains non-finite values")
    img = raw[crop_lines:]
    r0, r1, fr = _bilinear_axis(img.shape[0], SEGMENT_SHAPE[0])
    c0, c1, fc = _bilinear_axis(img.shape[1], SEGMENT_SHAPE[1])
    rows = img[r0] * (1.0 - fr)[:, None] + img[r1] * fr[:, None]
    out = rows[:, c0] * (1.0 - fc) + rows[:, c1] * fc
    return np.clip(out, 0.0, 1.0)


def phase_bits(response: np.ndarray, scale) -> np.ndarray:
    """1 where phase(response) is in (0, pi]; round-off-sized components count as zero."""
    tol = _ROUNDOFF * np.asarray(scale, dtype=np.float64)
    im = np.where(np.abs(response.imag) <= tol, 0.0, response.imag)
    re = np.where(np.abs(response.real) <= tol, 0.0, response.real)
    return (im > 0) | ((im == 0) & (re < 0))


def log_gabor_weights(n_bins: int = 256, params: LogGaborParams | None = None) -> np.ndarray:
    """One-sided log-Gabor transfer function over FFT bins.

    DC and every bin from n_bins/2 upward get weight 0; bin k in between gets
    ``exp(-0.5 * log(f/f0)**2 / log(sigma/f0)**2)`` with f = k/n_bins.
    """
    p = params or LogGaborParams()
    if n_bins < 4 or n_bins % 2:
        raise InvalidInputError(f"n_bins must be even and >= 4, got {n_bins}")
    w = np.zeros(n_bins)
    f = np.arange(1, n_bins // 2) / n_bins
    w[1 : n_bins // 2] = np.exp(
        -0.5 * np.log(f / p.center_frequency) ** 2 / np.log(p.bandwidth_ratio) ** 2
    )
    return w


def log_gabor_response(seg, params: LogGaborParams | None = None) -> np.ndarray:
    seg = validate_segment(seg)
    w = log_gabor_weights(seg.shape[1], params)
    return np.fft.ifft(np.fft.fft(seg, axis=1) * w, axis=1)


def log_gabor_encode(seg, params: LogGaborParams | None = None) -> IrisCode:
    """Row-wise 1D log-Gabor phase code, 16x256 bits."""
    seg = validate_segment(seg)
    resp = log_gabor_response(seg, params)
    scale = np.abs(seg).max(axis=1, keepdims=True)
    return IrisCode(phase_bits(resp, scale), Encoder.LG)


def haar_hilbert_encode(seg, params: HaarHilbertParams | None = None) -> IrisCode:
    """Haar-denoised, block-wise analytic-signal phase code, 8x128 bits.

    The LL band of a one-level Haar decomposition is cut into angular blocks;
    each block has its mean removed before the analytic signal is formed.
    """
    p = params or HaarHilbertParams()
    seg = validate_segment(seg)
    ll = haar_dwt2_level1(seg).ll
    rows, cols = ll.shape
    blocks = ll.reshape(rows, cols // p.block_size, p.block_size)
    scale = np.abs(blocks).max(axis=2, keepdims=True)
    centered = blocks - blocks.mean(axis=2, keepdims=True)
    spec = np.fft.fft(centered, axis=2) * analytic_multiplier(p.block_size)
    resp = centered + 1j * np.fft.ifft(spec, axis=2).imag
    bits = phase_bits(resp, scale).reshape(rows, cols)
    return IrisCode(bits, Encoder.HH)


def combined_encode(
    seg,
    lg: LogGaborParams | None = None,
    hh: HaarHilbertParams | None = None,
) -> tuple[IrisCode, IrisCode]:
    """(Haar-Hilbert code, Log-Gabor code) of the same segment."""
    return haar_hilbert_encode(seg, hh), log_gabor_encode(seg, lg)


@dataclass(frozen=True)
class EncoderConfig:
    """Which encoder(s) to run and their parameters."""

    kind: str = "combined"
    lg: LogGaborParams = LogGaborParams()
    hh: HaarHilbertParams = HaarHilbertParams()

    def __post_init__(self):
        if self.kind not in ("hh", "lg", "combined"):
            raise InvalidInputError(f"encoder must be hh, lg or combined, got {self.kind!r}")

    @property
    def channels(self) -> tuple[Encoder, ...]:
        return {"hh": (Encoder.HH,), "lg": (Encoder.LG,), "combined": (Encoder.HH, Encoder.LG)}[self.kind]

    def encode(self, seg) -> tuple[IrisCode, ...]:
        out = []
        for enc in self.channels:
            out.append(haar_hilbert_encode(seg, self.hh) if enc is Encoder.HH else log_gabor_encode(seg, self.lg))
        return tuple(out)
