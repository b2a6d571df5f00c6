"""Binary world files.

Layout (little-endian)::

    b"SSCWLD1"
    f64 resolution, u32 H, u32 W, u32 N, i64 seed, u32 doors
    N x (u8 len, name bytes)
    H*W u8 labels
    packbits(opaque), packbits(navigable)     each ceil(H*W/8) bytes
    H*W i16 room ids
    u32 room count, per room: u8 type index, 4 x u32 rect
    u32 object count, per object: u8 category, u8 tall, i16 room,
        3 x f64 (cx, cy, radius), u32 K, K x (u16 row, u16 col)
"""

from __future__ import annotations

import io
import struct
from pathlib import Path

import numpy as np

from ..errors import DataError
from .categories import ROOM_TYPES
from .core import ObjectInstance, Room, World

MAGIC = b"SSCWLD1"
_HEAD = struct.Struct("<dIIIqI")


def world_to_bytes(w: World) -> bytes:
    h, wd = w.shape
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(_HEAD.pack(w.resolution, h, wd, w.n_categories, w.seed, w.doors))
    for name in w.categories:
        raw = name.encode()
        buf.write(struct.pack("<B", len(raw)) + raw)
    buf.write(w.labels.astype(np.uint8).tobytes())
    buf.write(np.packbits(w.opaque.ravel()).tobytes())
    buf.write(np.packbits(w.navigable.ravel()).tobytes())
    buf.write(w.room_ids.astype("<i2").tobytes())
    buf.write(struct.pack("<I", len(w.rooms)))
    for room in w.rooms:
        buf.write(struct.pack("<B4I", ROOM_TYPES.index(room.room_type), *room.rect))
    buf.write(struct.pack("<I", len(w.objects)))
    for o in w.objects:
        buf.write(struct.pack("<BBh3dI", o.category, int(o.tall), o.room_id, *o.centroid, o.radius,
                              len(o.footprint)))
        buf.write(o.footprint.astype("<u2").tobytes())
    return buf.getvalue()


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise DataError("world file truncated")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        s = struct.Struct(fmt)
        return s.unpack(self.take(s.size))


def world_from_bytes(data: bytes) -> World:
    r = _Reader(data)
    if r.take(len(MAGIC)) != MAGIC:
        raise DataError("not a world file (bad magic)")
    res, h, wd, n, seed, doors = r.unpack(_HEAD.format)
    cats = []
    for _ in range(n):
        (ln,) = r.unpack("<B")
        cats.append(r.take(ln).decode())
    cells = h * wd
    labels = np.frombuffer(r.take(cells), dtype=np.uint8).reshape(h, wd).copy()
    nbits = (cells + 7) // 8
    opaque = np.unpackbits(np.frombuffer(r.take(nbits), np.uint8))[:cells].reshape(h, wd).astype(bool)
    nav = np.unpackbits(np.frombuffer(r.take(nbits), np.uint8))[:cells].reshape(h, wd).astype(bool)
    room_ids = np.frombuffer(r.take(2 * cells), dtype="<i2").reshape(h, wd).astype(np.int16)
    (n_rooms,) = r.unpack("<I")
    rooms = []
    for _ in range(n_rooms):
        t, *rect = r.unpack("<B4I")
        rooms.append(Room(ROOM_TYPES[t], tuple(rect)))
    (n_obj,) = r.unpack("<I")
    objects = []
    for _ in range(n_obj):
        cat, tall, room, cx, cy, rad, k = r.unpack("<BBh3dI")
        fp = np.frombuffer(r.take(4 * k), dtype="<u2").reshape(k, 2).astype(np.int64)
        objects.append(ObjectInstance(cat, fp, (cx, cy), rad, bool(tall), room))
    if r.pos != len(data):
        raise DataError("trailing bytes after world payload")
    return World(res, labels, opaque, nav, room_ids, rooms, objects, int(seed), tuple(cats), doors)


def save_world(w: World, path) -> None:
    Path(path).write_bytes(world_to_bytes(w))


def load_world(path) -> World:
    return world_from_bytes(Path(path).read_bytes())
