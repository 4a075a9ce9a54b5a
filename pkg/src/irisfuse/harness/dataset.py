"""Datasets of normalized iris segments: manifest ingestion, PGM I/O, synthesis."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.ndimage import gaussian_filter1d

from ..encoders import SEGMENT_SHAPE, preprocess, validate_segment
from ..errors import DataError, InvalidInputError

log = logging.getLogger(__name__)

MANIFEST_HEADER = ["path", "subject", "eye", "sample"]
EYES = ("L", "R")


@dataclass(frozen=True, order=True)
class SampleMeta:
    subject_id: str
    eye: str
    sample_index: int
    path: str = field(default="", compare=False)

    def __post_init__(self):
        if self.eye not in EYES:
            raise InvalidInputError(f"eye must be L or R, got {self.eye!r}")
        if self.sample_index < 0:
            raise InvalidInputError("sample index must be >= 0")

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.subject_id, self.eye, self.sample_index)

    @property
    def eye_class(self) -> tuple[str, str]:
        return (self.subject_id, self.eye)


@dataclass(frozen=True)
class Sample:
    meta: SampleMeta
    segment: np.ndarray


@dataclass
class Dataset:
    samples: list[Sample] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for s in self.samples:
            if s.meta.key in seen:
                raise DataError(f"duplicate sample {s.meta.key}")
            seen.add(s.meta.key)

    def __len__(self) -> int:
        return len(self.samples)

    def eye_classes(self) -> list[tuple[str, str]]:
        return sorted({s.meta.eye_class for s in self.samples})

    def subjects(self) -> list[str]:
        return sorted({s.meta.subject_id for s in self.samples})

    def check_dual(self) -> None:
        """Every subject must have both eyes with the same sample indices."""
        by = {}
        for s in self.samples:
            by.setdefault(s.meta.subject_id, {}).setdefault(s.meta.eye, set()).add(s.meta.sample_index)
        for subject, eyes in sorted(by.items()):
            if set(eyes) != set(EYES):
                raise DataError(f"subject {subject!r} lacks an eye for the dual scenario")
            if eyes["L"] != eyes["R"]:
                raise DataError(f"subject {subject!r} has unequal left/right samples")


# --------------------------------------------------------------------------
# PGM / CSV segment files


def read_pgm(path) -> np.ndarray:
    """Binary 8-bit PGM (P5, maxval 255) as a uint8 matrix."""
    data = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise DataError(f"{path}: truncated PGM header")
        if data[pos : pos + 1] == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    pos += 1  # single whitespace byte before the raster
    if tokens[0] != b"P5":
        raise DataError(f"{path}: not a binary PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise DataError(f"{path}: malformed PGM header") from exc
    if maxval != 255:
        raise DataError(f"{path}: unsupported PGM depth (maxval {maxval}, need 255)")
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise DataError(f"{path}: truncated PGM raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width)


def write_pgm(path, image) -> None:
    img = np.asarray(image)
    if img.ndim != 2:
        raise InvalidInputError("PGM images must be 2-D")
    if img.dtype != np.uint8:
        img = np.clip(np.rint(np.asarray(img, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)
    h, w = img.shape
    Path(path).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + img.tobytes())


def read_segment_file(path) -> np.ndarray:
    """Raw unwrapped segment in [0, 1] from a PGM or a CSV of reals."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"missing segment file {path}")
    if path.suffix.lower() == ".csv":
        try:
            arr = np.loadtxt(path, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise DataError(f"{path}: malformed CSV segment") from exc
        return arr
    return read_pgm(path).astype(np.float64) / 255.0


def load_manifest(path, crop_lines: int = 1, strict: bool = True) -> Dataset:
    """Load a ``path,subject,eye,sample`` CSV manifest and preprocess every segment.

    Paths resolve relative to the manifest.  In strict mode the first bad row
    raises :class:`DataError`; otherwise bad rows are logged and recorded in
    ``Dataset.errors``.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"missing manifest {path}")
    samples: list[Sample] = []
    errors: list[str] = []
    seen = set()
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return Dataset()
        if [h.strip() for h in header] != MANIFEST_HEADER:
            raise DataError(f"{path}: manifest header must be {','.join(MANIFEST_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                if len(row) != 4:
                    raise DataError(f"expected 4 fields, got {len(row)}")
                rel, subject, eye, idx = (c.strip() for c in row)
                try:
                    meta = SampleMeta(subject, eye, int(idx), rel)
                except (ValueError, InvalidInputError) as exc:
                    raise DataError(str(exc)) from exc
                if meta.key in seen:
                    raise DataError(f"duplicate sample {meta.key}")
                raw = read_segment_file(path.parent / rel)
                try:
                    seg = preprocess(raw, crop_lines)
                except InvalidInputError as exc:
                    raise DataError(str(exc)) from exc
            except DataError as exc:
                msg = f"{path}:{lineno}: {exc}"
                if strict:
                    raise DataError(msg) from exc
                log.warning(msg)
                errors.append(msg)
                continue
            seen.add(meta.key)
            samples.append(Sample(meta, seg))
    return Dataset(samples, errors)


def write_manifest(path, dataset: Dataset, fmt: str = "pgm") -> None:
    """Write every segment next to ``path`` and a manifest referencing them."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    seg_dir = path.parent / "segments"
    seg_dir.mkdir(exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MANIFEST_HEADER)
        for s in dataset.samples:
            m = s.meta
            name = f"{m.subject_id}_{m.eye}_{m.sample_index}.{fmt}"
            if fmt == "pgm":
                write_pgm(seg_dir / name, s.segment)
            elif fmt == "csv":
                np.savetxt(seg_dir / name, s.segment, delimiter=",", fmt="%.17g")
            else:
                raise InvalidInputError(f"unknown segment format {fmt!r}")
            w.writerow([f"segments/{name}", m.subject_id, m.eye, m.sample_index])


# --------------------------------------------------------------------------
# synthetic data


@dataclass(frozen=True)
class SynthSpec:
    seed: int = 1
    subjects: int = 20
    samples_per_eye: int = 5
    noise_sigma: float = 0.05
    rotation_max: int = 0

    def __post_init__(self):
        if self.subjects < 1 or self.samples_per_eye < 1:
            raise InvalidInputError("subjects and samples_per_eye must be >= 1")
        if self.noise_sigma < 0:
            raise InvalidInputError("noise_sigma must be >= 0")
        if self.rotation_max < 0:
            raise InvalidInputError("rotation_max must be >= 0")

    @classmethod
    def parse(cls, text: str) -> "SynthSpec":
        """From ``seed=1,subjects=20,...`` or a path to such a file (JSON also accepted)."""
        import json

        p = Path(text)
        if p.exists():
            text = p.read_text()
        text = text.strip()
        if text.startswith("{"):
            kv = json.loads(text)
        else:
            kv = {}
            for item in text.replace("\n", ",").split(","):
                if item.strip():
                    k, sep, v = item.partition("=")
                    if not sep:
                        raise InvalidInputError(f"bad synth spec item {item!r}")
                    kv[k.strip()] = v.strip()
        aliases = {"samples": "samples_per_eye", "noise": "noise_sigma", "rotation": "rotation_max"}
        kv = {aliases.get(k, k): v for k, v in kv.items()}
        unknown = set(kv) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidInputError(f"unknown synth spec keys {sorted(unknown)}")
        types = {"seed": int, "subjects": int, "samples_per_eye": int, "noise_sigma": float, "rotation_max": int}
        return cls(**{k: types[k](v) for k, v in kv.items()})

    def to_text(self) -> str:
        return (
            f"seed={self.seed},subjects={self.subjects},samples={self.samples_per_eye},"
            f"noise={self.noise_sigma!r},rotation={self.rotation_max}\n"
        )


# texture model: band-limited noise along each row, lightly smoothed across rows
TEXTURE_CUTOFF = 0.15  # cycles/sample, angular
TEXTURE_RADIAL_SIGMA = 1.0  # rows
TEXTURE_CONTRAST = 0.05
TEXTURE_MEAN = 0.5


def base_texture(rng: np.random.Generator) -> np.ndarray:
    """Seeded smooth random field with mean 0.5 and per-row std 0.05.

    White noise is brick-wall low-passed along each row, then Gaussian-smoothed
    radially so neighbouring rows are correlated as in real iris fibres.
    """
    rows, cols = SEGMENT_SHAPE
    noise = rng.standard_normal((rows, cols))
    spec = np.fft.rfft(noise, axis=1)
    spec[:, 0] = 0.0
    spec[:, np.fft.rfftfreq(cols) > TEXTURE_CUTOFF] = 0.0
    field_ = np.fft.irfft(spec, n=cols, axis=1)
    field_ = gaussian_filter1d(field_, TEXTURE_RADIAL_SIGMA, axis=0, mode="nearest")
    field_ /= field_.std(axis=1, keepdims=True)
    return TEXTURE_MEAN + TEXTURE_CONTRAST * field_


def synth_dataset(spec: SynthSpec) -> Dataset:
    """Seeded synthetic dataset; every (subject, eye) gets its own base texture.

    Each sample adds Gaussian pixel noise and a uniform circular angular shift
    in [-rotation_max, rotation_max], then clips to [0, 1].
    """
    rng = np.random.default_rng(spec.seed)
    width = len(str(spec.subjects - 1))
    samples = []
    for subj in range(spec.subjects):
        sid = f"S{subj:0{max(width, 3)}d}"
        for eye in EYES:
            base = base_texture(rng)
            for k in range(spec.samples_per_eye):
                seg = base + spec.noise_sigma * rng.standard_normal(SEGMENT_SHAPE) if spec.noise_sigma else base.copy()
                shift = int(rng.integers(-spec.rotation_max, spec.rotation_max + 1)) if spec.rotation_max else 0
                if shift:
                    seg = np.roll(seg, shift, axis=1)
                seg = np.clip(seg, 0.0, 1.0)
                samples.append(Sample(SampleMeta(sid, eye, k), validate_segment(seg)))
    return Dataset(samples)
