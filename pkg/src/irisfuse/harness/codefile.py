"""Binary container for iris codes.

Layout::

    b"IRCD"  version:u8 (=1)
    repeated records:
        tag:u8 (1=HH, 2=LG)  rows:u16le  cols:u16le
        meta_len:u16le  meta:utf-8 "subject/eye/index"
        rows * ceil(cols/8) bytes of bits, MSB first, rows padded to a byte
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from ..encoders import Encoder, IrisCode
from ..errors import CodeFileError
from .dataset import SampleMeta

MAGIC = b"IRCD"
VERSION = 1
_TAGS = {Encoder.HH: 1, Encoder.LG: 2}
_ENCODERS = {v: k for k, v in _TAGS.items()}
_HEAD = struct.Struct("<BHH")
_LEN = struct.Struct("<H")


@dataclass(frozen=True)
class CodeRecord:
    meta: SampleMeta
    code: IrisCode


def _meta_text(meta: SampleMeta) -> bytes:
    return f"{meta.subject_id}/{meta.eye}/{meta.sample_index}".encode("utf-8")


def _parse_meta(raw: bytes) -> SampleMeta:
    try:
        subject, eye, idx = raw.decode("utf-8").rsplit("/", 2)
        return SampleMeta(subject, eye, int(idx))
    except (UnicodeDecodeError, ValueError) as exc:
        raise CodeFileError(f"malformed record metadata {raw!r}") from exc


def dumps_codes(records: Iterable[CodeRecord]) -> bytes:
    out = bytearray(MAGIC)
    out.append(VERSION)
    for rec in records:
        rows, cols = rec.code.shape
        meta = _meta_text(rec.meta)
        if len(meta) > 0xFFFF:
            raise CodeFileError("metadata too long")
        out += _HEAD.pack(_TAGS[rec.code.encoder], rows, cols)
        out += _LEN.pack(len(meta)) + meta
        out += rec.code.packed()
    return bytes(out)


def loads_codes(data: bytes) -> list[CodeRecord]:
    if len(data) < len(MAGIC) + 1:
        raise CodeFileError("truncated code file header")
    if data[:4] != MAGIC:
        raise CodeFileError(f"bad magic {data[:4]!r}")
    if data[4] != VERSION:
        raise CodeFileError(f"unsupported code file version {data[4]}")
    pos = 5
    records = []
    while pos < len(data):
        if pos + _HEAD.size + _LEN.size > len(data):
            raise CodeFileError(f"truncated record header at byte {pos}")
        tag, rows, cols = _HEAD.unpack_from(data, pos)
        pos += _HEAD.size
        (mlen,) = _LEN.unpack_from(data, pos)
        pos += _LEN.size
        if tag not in _ENCODERS:
            raise CodeFileError(f"unknown encoder tag {tag}")
        if pos + mlen > len(data):
            raise CodeFileError("truncated record metadata")
        meta = _parse_meta(data[pos : pos + mlen])
        pos += mlen
        row_bytes = (cols + 7) // 8
        n = rows * row_bytes
        if pos + n > len(data):
            raise CodeFileError("truncated record payload")
        packed = np.frombuffer(data, dtype=np.uint8, count=n, offset=pos).reshape(rows, row_bytes)
        pos += n
        bits = np.unpackbits(packed, axis=1, count=cols).astype(bool)
        try:
            code = IrisCode(bits, _ENCODERS[tag])
        except ValueError as exc:
            raise CodeFileError(str(exc)) from exc
        records.append(CodeRecord(meta, code))
    return records


def save_codes(path, records: Iterable[CodeRecord]) -> None:
    Path(path).write_bytes(dumps_codes(records))


def load_codes(path) -> list[CodeRecord]:
    path = Path(path)
    if not path.exists():
        raise CodeFileError(f"missing code file {path}")
    return loads_codes(path.read_bytes())
