"""SSCNN1 checkpoint files.

Layout (little-endian)::

    b"SSCNN1"
    u32 tensor count
    per tensor: u32 name length, name bytes (utf-8),
                u32 rank, rank x u32 extents,
                prod(extents) x f32 payload
"""

from __future__ import annotations

import io
import struct
from pathlib import Path

import numpy as np
import torch
from torch import nn

from ..errors import CheckpointError

MAGIC = b"SSCNN1"


def state_to_bytes(state: dict[str, torch.Tensor]) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<I", len(state)))
    for name, t in state.items():
        raw = name.encode()
        arr = t.detach().cpu().numpy().astype("<f4", copy=False)
        buf.write(struct.pack("<I", len(raw)) + raw)
        buf.write(struct.pack("<I", arr.ndim))
        buf.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
        buf.write(np.ascontiguousarray(arr).tobytes())
    return buf.getvalue()


def state_from_bytes(data: bytes) -> dict[str, torch.Tensor]:
    pos = 0

    def take(n):
        nonlocal pos
        if pos + n > len(data):
            raise CheckpointError(f"checkpoint truncated at byte {pos} (needs {n} more)")
        out = data[pos:pos + n]
        pos += n
        return out

    magic = take(len(MAGIC))
    if magic != MAGIC:
        raise CheckpointError(f"bad checkpoint magic {magic!r}, expected {MAGIC!r}")
    (count,) = struct.unpack("<I", take(4))
    state = {}
    for _ in range(count):
        (ln,) = struct.unpack("<I", take(4))
        name = take(ln).decode()
        (rank,) = struct.unpack("<I", take(4))
        shape = struct.unpack(f"<{rank}I", take(4 * rank))
        n = int(np.prod(shape)) if rank else 1
        arr = np.frombuffer(take(4 * n), dtype="<f4").reshape(shape)
        state[name] = torch.from_numpy(arr.astype(np.float32))
    if pos != len(data):
        raise CheckpointError(f"{len(data) - pos} trailing bytes after checkpoint payload")
    return state


def save_checkpoint(net: nn.Module, path) -> None:
    Path(path).write_bytes(state_to_bytes(net.state_dict()))


def load_checkpoint(net: nn.Module, path) -> nn.Module:
    """Load parameters into ``net`` in place; reject any name or shape mismatch."""
    state = state_from_bytes(Path(path).read_bytes())
    load_state(net, state)
    return net


def load_state(net: nn.Module, state: dict[str, torch.Tensor]) -> None:
    own = net.state_dict()
    missing = sorted(set(own) - set(state))
    extra = sorted(set(state) - set(own))
    if missing or extra:
        raise CheckpointError(f"checkpoint does not fit network: missing {missing[:3]}, unexpected {extra[:3]}")
    for name, t in own.items():
        if tuple(state[name].shape) != tuple(t.shape):
            raise CheckpointError(
                f"shape mismatch for {name}: checkpoint {tuple(state[name].shape)}, network {tuple(t.shape)}"
            )
    net.load_state_dict(state)
