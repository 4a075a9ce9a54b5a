"""Hamming-based similarity between iris codes and geometric-mean score fusion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .encoders import IrisCode
from .errors import InvalidInputError


@dataclass(frozen=True)
class MatchConfig:
    """``max_shift`` circular column shifts are tried in each direction."""

    max_shift: int = 0

    def __post_init__(self):
        if self.max_shift < 0:
            raise InvalidInputError(f"max_shift must be >= 0, got {self.max_shift}")


def _check_pair(a: IrisCode, b: IrisCode) -> None:
    if a.encoder is not b.encoder or a.shape != b.shape:
        raise InvalidInputError(
            f"cannot compare {a.encoder.value}{a.shape} with {b.encoder.value}{b.shape}"
        )


def _score(total: int, differing) -> np.ndarray | float:
    return (total - differing) / total


def similarity(a: IrisCode, b: IrisCode, cfg: MatchConfig | None = None) -> float:
    """1 - fractional Hamming distance, maximised over the allowed column shifts."""
    cfg = cfg or MatchConfig()
    _check_pair(a, b)
    total = a.bits.size
    best = total
    for s in range(-cfg.max_shift, cfg.max_shift + 1):
        other = np.roll(b.bits, s, axis=1) if s else b.bits
        best = min(best, int(np.count_nonzero(a.bits != other)))
    return float(_score(total, best))


def _stack(codes: Sequence[IrisCode]) -> np.ndarray:
    if not codes:
        raise InvalidInputError("empty code list")
    enc, shape = codes[0].encoder, codes[0].shape
    for c in codes:
        if c.encoder is not enc or c.shape != shape:
            raise InvalidInputError("all codes in a batch must share encoder and shape")
    return np.stack([c.bits for c in codes])


def similarity_matrix(
    codes_a: Sequence[IrisCode],
    codes_b: Sequence[IrisCode] | None = None,
    cfg: MatchConfig | None = None,
) -> np.ndarray:
    """All-pairs :func:`similarity` via bit-count algebra.

    Differing bits between 0/1 vectors are ``|a| + |b| - 2 a.b``; the dot
    products are integer-valued well below 2**24, so float32 BLAS is exact.
    """
    cfg = cfg or MatchConfig()
    a = _stack(codes_a)
    b = a if codes_b is None else _stack(codes_b)
    if a.shape[1:] != b.shape[1:] or codes_a[0].encoder is not (codes_b or codes_a)[0].encoder:
        raise InvalidInputError("code batches differ in encoder or shape")
    total = a[0].size
    fa = a.reshape(len(a), -1).astype(np.float32)
    na = fa.sum(axis=1, dtype=np.float64)
    best = None
    for s in range(-cfg.max_shift, cfg.max_shift + 1):
        bs = np.roll(b, s, axis=2) if s else b
        fb = bs.reshape(len(bs), -1).astype(np.float32)
        nb = fb.sum(axis=1, dtype=np.float64)
        diff = na[:, None] + nb[None, :] - 2.0 * (fa @ fb.T).astype(np.float64)
        best = diff if best is None else np.minimum(best, diff)
    return _score(total, np.rint(best))


def _check_range(*scores) -> None:
    for s in scores:
        arr = np.asarray(s, dtype=np.float64)
        if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
            raise InvalidInputError("similarity scores must lie in [0, 1]")


def fuse_single(s1, s2):
    """Geometric mean of two channel scores; works element-wise on arrays."""
    _check_range(s1, s2)
    s1 = np.asarray(s1, dtype=np.float64)
    s2 = np.asarray(s2, dtype=np.float64)
    fused = np.clip(np.sqrt(s1 * s2), np.minimum(s1, s2), np.maximum(s1, s2))
    return float(fused) if fused.ndim == 0 else fused


def fuse_dual(ls1, ls2, rs1, rs2):
    """Fourth root of the product of the four channel scores of both eyes."""
    _check_range(ls1, ls2, rs1, rs2)
    prod = (
        np.asarray(ls1, dtype=np.float64)
        * np.asarray(ls2, dtype=np.float64)
        * np.asarray(rs1, dtype=np.float64)
        * np.asarray(rs2, dtype=np.float64)
    )
    fused = np.sqrt(np.sqrt(prod))
    return float(fused) if fused.ndim == 0 else fused


def fuse(scores: Sequence) -> np.ndarray | float:
    """Geometric mean of 1, 2 or 4 channel scores (the fusion rules in use)."""
    if len(scores) == 1:
        _check_range(scores[0])
        return scores[0]
    if len(scores) == 2:
        return fuse_single(*scores)
    if len(scores) == 4:
        return fuse_dual(*scores)
    raise InvalidInputError(f"no fusion rule for {len(scores)} channels")
