"""Numeric kernels: DFT, analytic signal / Hilbert transform, single-level 2D Haar DWT.

All routines work in double precision and are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


def _as_signal(x, min_len: int, even: bool) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidInputError(f"expected a 1-D signal, got shape {x.shape}")
    n = x.shape[0]
    if n < min_len:
        raise InvalidInputError(f"signal length {n} < {min_len}")
    if even and n % 2:
        raise InvalidInputError(f"signal length {n} must be even")
    return x


def dft_real(x) -> np.ndarray:
    """N-point discrete Fourier spectrum of a real signal (N >= 2)."""
    x = _as_signal(x, 2, even=False)
    return np.fft.fft(x)


def idft(spectrum) -> np.ndarray:
    """Inverse of :func:`dft_real` (complex output)."""
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    if spectrum.ndim != 1 or spectrum.shape[0] < 2:
        raise InvalidInputError("spectrum must be 1-D with at least 2 bins")
    return np.fft.ifft(spectrum)


def analytic_multiplier(n: int) -> np.ndarray:
    """Spectral weights turning a real spectrum into an analytic one.

    DC and Nyquist are kept, bins 1..n/2-1 doubled, negative frequencies zeroed.
    """
    h = np.zeros(n)
    h[0] = 1.0
    h[n // 2] = 1.0
    h[1 : n // 2] = 2.0
    return h


def analytic_signal(x) -> np.ndarray:
    """Analytic signal ``x + j*H(x)`` of an even-length real signal.

    The real part is returned as ``x`` itself, so ``Re(y) == x`` holds exactly.
    """
    x = _as_signal(x, 4, even=True)
    y = np.fft.ifft(np.fft.fft(x) * analytic_multiplier(x.shape[0]))
    return x + 1j * y.imag


def hilbert(x) -> np.ndarray:
    """Discrete Hilbert transform: imaginary part of the analytic signal."""
    return analytic_signal(x).imag


@dataclass(frozen=True)
class HaarDecomposition:
    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return haar_idwt2_level1(self)


def haar_dwt2_level1(m) -> HaarDecomposition:
    """Single-level orthonormal 2D Haar decomposition.

    For each 2x2 block ``[a b; c d]``::

        ll = (a+b+c+d)/2   lh = (a+b-c-d)/2
        hl = (a-b+c-d)/2   hh = (a-b-c+d)/2
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise InvalidInputError(f"expected a 2-D matrix, got shape {m.shape}")
    rows, cols = m.shape
    if rows < 2 or cols < 2 or rows % 2 or cols % 2:
        raise InvalidInputError(f"matrix dimensions must be even and >= 2, got {m.shape}")
    a = m[0::2, 0::2]
    b = m[0::2, 1::2]
    c = m[1::2, 0::2]
    d = m[1::2, 1::2]
    return HaarDecomposition(
        ll=(a + b + c + d) / 2.0,
        lh=(a + b - c - d) / 2.0,
        hl=(a - b + c - d) / 2.0,
        hh=(a - b - c + d) / 2.0,
    )


def haar_idwt2_level1(dec: HaarDecomposition) -> np.ndarray:
    """Inverse of :func:`haar_dwt2_level1` (the transform is its own inverse per block)."""
    ll, lh, hl, hh = (np.asarray(band, dtype=np.float64) for band in (dec.ll, dec.lh, dec.hl, dec.hh))
    if not (ll.shape == lh.shape == hl.shape == hh.shape) or ll.ndim != 2:
        raise InvalidInputError("Haar bands must be 2-D and of equal shape")
    out = np.empty((2 * ll.shape[0], 2 * ll.shape[1]))
    out[0::2, 0::2] = (ll + lh + hl + hh) / 2.0
    out[0::2, 1::2] = (ll + lh - hl - hh) / 2.0
    out[1::2, 0::2] = (ll - lh + hl - hh) / 2.0
    out[1::2, 1::2] = (ll - lh - hl + hh) / 2.0
    return out
