"""Exhaustive single-eye and dual-iris verification tests."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..encoders import Encoder, EncoderConfig, IrisCode
from ..errors import DataError
from ..evaluation import ScorePool
from ..matching import MatchConfig, fuse, similarity_matrix
from .codefile import CodeRecord
from .dataset import Dataset

FUSED = "fused"


def encode_dataset(ds: Dataset, config: EncoderConfig, workers: int = 1) -> list[tuple[IrisCode, ...]]:
    """Codes for every sample in dataset order (one tuple entry per channel)."""
    segs = [s.segment for s in ds.samples]
    if workers <= 1:
        return [config.encode(s) for s in segs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(config.encode, segs))


def code_records(ds: Dataset, config: EncoderConfig, workers: int = 1) -> list[CodeRecord]:
    out = []
    for sample, codes in zip(ds.samples, encode_dataset(ds, config, workers)):
        out.extend(CodeRecord(sample.meta, c) for c in codes)
    return out


@dataclass(frozen=True)
class ExhaustiveResult:
    """Per-channel scores in pair-enumeration order, split into genuine and imposter.

    Channel arrays are aligned element-wise, so the fused scores can be
    recomputed from the stored channel scores.
    """

    scenario: str
    channels: tuple[str, ...]
    genuine: dict
    imposter: dict

    @property
    def primary(self) -> str:
        return FUSED if FUSED in self.genuine else self.channels[0]

    def pool(self, channel: str | None = None) -> ScorePool:
        ch = channel or self.primary
        return ScorePool(self.genuine[ch], self.imposter[ch])

    def pools(self) -> dict[str, ScorePool]:
        return {ch: self.pool(ch) for ch in self.genuine}


def _channel_name(enc: Encoder, eye: str | None = None) -> str:
    return enc.value if eye is None else f"{eye}-{enc.value}"


def run_exhaustive_single(
    ds: Dataset,
    config: EncoderConfig | None = None,
    match: MatchConfig | None = None,
    workers: int = 1,
) -> ExhaustiveResult:
    """Every eye is an identity; all unordered sample pairs are compared once."""
    config = config or EncoderConfig()
    labels = [s.meta.eye_class for s in ds.samples]
    if len(set(labels)) < 2:
        raise DataError("single-eye test needs at least 2 eye classes")
    if len(labels) == len(set(labels)):
        raise DataError("single-eye test needs a class with at least 2 samples")
    codes = encode_dataset(ds, config, workers)
    _, lab = np.unique(np.array([f"{a}\x00{b}" for a, b in labels]), return_inverse=True)
    iu = np.triu_indices(len(labels), 1)
    same = lab[iu[0]] == lab[iu[1]]
    genuine, imposter = {}, {}
    names = []
    for k, enc in enumerate(config.channels):
        name = _channel_name(enc)
        names.append(name)
        scores = similarity_matrix([c[k] for c in codes], cfg=match)[iu]
        genuine[name], imposter[name] = scores[same], scores[~same]
    if len(names) > 1:
        genuine[FUSED] = fuse([genuine[n] for n in names])
        imposter[FUSED] = fuse([imposter[n] for n in names])
    return ExhaustiveResult("single", tuple(names), genuine, imposter)


def run_exhaustive_dual(
    ds: Dataset,
    config: EncoderConfig | None = None,
    match: MatchConfig | None = None,
    workers: int = 1,
) -> ExhaustiveResult:
    """Subjects are identities and every comparison uses both eyes at once.

    A candidate acquisition (subject A, index i) is compared with an enrolled
    one (subject B, index j); genuine when A = B and i != j.  Left is matched
    with left, right with right, and all channel scores are fused.
    """
    config = config or EncoderConfig()
    ds.check_dual()
    by_key = {s.meta.key: k for k, s in enumerate(ds.samples)}
    order = sorted({(s.meta.subject_id, s.meta.sample_index) for s in ds.samples})
    subjects = [sid for sid, _ in order]
    if len(set(subjects)) < 2:
        raise DataError("dual test needs at least 2 subjects")
    if len(subjects) == len(set(subjects)):
        raise DataError("dual test needs a subject with at least 2 acquisitions")
    left = [by_key[(sid, "L", i)] for sid, i in order]
    right = [by_key[(sid, "R", i)] for sid, i in order]
    codes = encode_dataset(ds, config, workers)
    _, lab = np.unique(np.array(subjects), return_inverse=True)
    iu = np.triu_indices(len(order), 1)
    same = lab[iu[0]] == lab[iu[1]]
    genuine, imposter = {}, {}
    names = []
    for eye, idx in (("L", left), ("R", right)):
        for k, enc in enumerate(config.channels):
            name = _channel_name(enc, eye)
            names.append(name)
            scores = similarity_matrix([codes[i][k] for i in idx], cfg=match)[iu]
            genuine[name], imposter[name] = scores[same], scores[~same]
    genuine[FUSED] = fuse([genuine[n] for n in names])
    imposter[FUSED] = fuse([imposter[n] for n in names])
    return ExhaustiveResult("dual", tuple(names), genuine, imposter)


def run_exhaustive(ds: Dataset, scenario: str, config=None, match=None, workers: int = 1) -> ExhaustiveResult:
    if scenario == "single":
        return run_exhaustive_single(ds, config, match, workers)
    if scenario == "dual":
        return run_exhaustive_dual(ds, config, match, workers)
    raise ValueError(f"unknown scenario {scenario!r}")
