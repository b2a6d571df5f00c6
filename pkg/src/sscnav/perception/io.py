"""EgoSemMap files: ``b"SSCMAP1"``, u16 R, u8 N, R*R label bytes, packbits(observed)."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import DataError
from .egomap import EgoSemMap

MAGIC = b"SSCMAP1"


def map_to_bytes(m: EgoSemMap) -> bytes:
    r = m.size
    return (MAGIC + struct.pack("<HB", r, m.n_categories) + m.labels.astype(np.uint8).tobytes()
            + np.packbits(m.observed.ravel()).tobytes())


def map_from_bytes(data: bytes) -> EgoSemMap:
    if data[:len(MAGIC)] != MAGIC:
        raise DataError("not a map file (bad magic)")
    off = len(MAGIC)
    if len(data) < off + 3:
        raise DataError("map file truncated")
    r, n = struct.unpack_from("<HB", data, off)
    off += 3
    nbits = (r * r + 7) // 8
    if len(data) != off + r * r + nbits:
        raise DataError(f"map file has {len(data)} bytes, expected {off + r * r + nbits}")
    labels = np.frombuffer(data, np.uint8, r * r, off).reshape(r, r).copy()
    observed = np.unpackbits(np.frombuffer(data, np.uint8, nbits, off + r * r))[:r * r]
    return EgoSemMap(labels, observed.reshape(r, r).astype(bool), n)


def save_map(m: EgoSemMap, path) -> None:
    Path(path).write_bytes(map_to_bytes(m))


def load_map(path) -> EgoSemMap:
    return map_from_bytes(Path(path).read_bytes())
