"""Deterministic raster images of maps, confidence, Q values and trajectories.

Images are (H, W, 3) uint8 arrays. Array row 0 of a map is drawn at the
bottom, so the agent's forward direction (+row) and the world's +y both
point up in the picture.
"""

from __future__ import annotations

import colorsys
import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DataError
from .world.categories import CATEGORIES

# one colour per default category, then unknown
_BASE = np.array([
    (222, 214, 196),  # floor
    (40, 40, 48),  # wall
    (164, 112, 60),  # door
    (86, 140, 214),  # bed
    (236, 164, 52),  # counter
    (84, 200, 206),  # shower
    (160, 98, 196),  # sink
    (214, 82, 110),  # sofa
    (126, 88, 42),  # table
    (246, 228, 90),  # toilet
    (110, 184, 92),  # chair
    (98, 98, 150),  # cabinet
], np.uint8)
UNKNOWN_RGB = (96, 96, 96)
NEUTRAL_RGB = (0, 0, 0)
OBSERVED_RGB = (255, 255, 255)
CORRECT_RGB = (0, 200, 0)
WRONG_RGB = (220, 0, 0)
ARGMAX_RGB = (0, 255, 0)
AGENT_RGB = (0, 120, 255)
PATH_RGB = (255, 0, 255)
START_RGB = (0, 120, 255)
END_RGB = (255, 0, 0)


def palette(n_categories: int = len(CATEGORIES)) -> np.ndarray:
    """(n_categories + 1, 3) table; the last row is the unknown colour.

    Categories beyond the default twelve get evenly spread golden-angle hues.
    """
    if n_categories < 1:
        raise ConfigurationError("need at least one category", "n_categories")
    rows = [tuple(c) for c in _BASE[:n_categories]]
    for k in range(len(rows), n_categories):
        h = (k * 0.618033988749895) % 1.0
        rows.append(tuple(int(round(255 * v)) for v in colorsys.hsv_to_rgb(h, 0.7, 0.9)))
    rows.append(UNKNOWN_RGB)
    return np.array(rows, np.uint8)


def _up(img: np.ndarray, scale: int) -> np.ndarray:
    img = img[::-1]
    if scale != 1:
        img = img.repeat(scale, axis=0).repeat(scale, axis=1)
    return np.ascontiguousarray(img)


def render_labels(labels: np.ndarray, n_categories: int, scale: int = 1) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() > n_categories):
        raise DataError(f"labels outside [0, {n_categories}]")
    return _up(palette(n_categories)[labels], scale)


def render_map(m, scale: int = 1) -> np.ndarray:
    """Palette image of an EgoSemMap."""
    return render_labels(m.labels, m.n_categories, scale)


def render_confidence(values: np.ndarray, scale: int = 1) -> np.ndarray:
    """Grey ramp: 0 is black, 1 is white."""
    v = np.asarray(values, np.float64)
    if not np.all(np.isfinite(v)):
        raise DataError("confidence has non-finite values")
    g = np.rint(np.clip(v, 0.0, 1.0) * 255).astype(np.uint8)
    return _up(np.repeat(g[..., None], 3, axis=-1), scale)


def render_error_map(pred_labels: np.ndarray, target, input_mask: np.ndarray, scale: int = 1) -> np.ndarray:
    """White on input-observed cells; green or red where the target is known and
    the input was not, by whether the prediction is right; neutral elsewhere."""
    pred = np.asarray(pred_labels)
    inp = np.asarray(input_mask, bool)
    scored = target.observed & ~inp
    img = np.empty(pred.shape + (3,), np.uint8)
    img[:] = NEUTRAL_RGB
    img[inp] = OBSERVED_RGB
    right = pred == target.labels
    img[scored & right] = CORRECT_RGB
    img[scored & ~right] = WRONG_RGB
    return _up(img, scale)


def _ramp(t: np.ndarray) -> np.ndarray:
    """Black -> red -> yellow -> white for t in [0, 1]."""
    x = t * 3.0
    r = np.clip(x, 0, 1)
    g = np.clip(x - 1, 0, 1)
    b = np.clip(x - 2, 0, 1)
    return np.rint(np.stack([r, g, b], axis=-1) * 255).astype(np.uint8)


def qmap_argmax(q: np.ndarray) -> tuple[int, int]:
    """First maximum in row-major order."""
    q = np.asarray(q)
    return tuple(int(i) for i in np.unravel_index(int(np.argmax(q)), q.shape))


def render_qmap(q: np.ndarray, scale: int = 1, mark_agent: bool = True) -> np.ndarray:
    """Min-max normalised heat map with the argmax and the agent cell marked.

    The agent sits at the corner of cell (R/2, R/2); that cell is marked.
    A constant map normalises to zero everywhere.
    """
    q = np.asarray(q, np.float64)
    if q.ndim != 2:
        raise DataError("Q map must be 2-D")
    if not np.all(np.isfinite(q)):
        raise DataError("Q map has non-finite values")
    lo, hi = q.min(), q.max()
    t = (q - lo) / (hi - lo) if hi > lo else np.zeros_like(q)
    img = _ramp(t)
    if mark_agent:
        img[q.shape[0] // 2, q.shape[1] // 2] = AGENT_RGB
    img[qmap_argmax(q)] = ARGMAX_RGB
    return _up(img, scale)


def render_trajectory(world, poses, scale: int = 1) -> np.ndarray:
    """World labels with the visited cells drawn, start and end marked.

    ``poses`` may hold ``Pose`` objects or ``(x, y, heading)`` tuples as
    recorded in episode results.
    """
    img = palette(world.n_categories)[world.labels].copy()
    xy = [(p.x, p.y) if hasattr(p, "x") else (p[0], p[1]) for p in poses]
    cells = [world.cell_of(x, y) for x, y in xy]
    cells = [rc for rc in cells if world.in_bounds(*rc)]
    for a, b in zip(cells, cells[1:]):
        n = max(abs(b[0] - a[0]), abs(b[1] - a[1]), 1)
        rr = np.rint(np.linspace(a[0], b[0], n + 1)).astype(int)
        cc = np.rint(np.linspace(a[1], b[1], n + 1)).astype(int)
        img[rr, cc] = PATH_RGB
    if cells:
        img[cells[0]] = START_RGB
        img[cells[-1]] = END_RGB
    return _up(img, scale)


def ppm_bytes(img: np.ndarray) -> bytes:
    img = _check(img)
    h, w, _ = img.shape
    return f"P6\n{w} {h}\n255\n".encode() + img.tobytes()


def png_bytes(img: np.ndarray) -> bytes:
    """Truecolour 8-bit PNG, no filtering, fixed compression level."""
    img = _check(img)
    h, w, _ = img.shape
    raw = b"".join(b"\x00" + img[i].tobytes() for i in range(h))

    def chunk(kind: bytes, data: bytes) -> bytes:
        return struct.pack(">I", len(data)) + kind + data + struct.pack(">I", zlib.crc32(kind + data))

    return (b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0))
            + chunk(b"IDAT", zlib.compress(raw, 9)) + chunk(b"IEND", b""))


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    # header tokens are separated by single whitespace bytes in what we write
    fields, pos = [], 0
    while len(fields) < 4:
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end + 1
    if fields[0] != b"P6" or fields[3] != b"255":
        raise DataError("not a binary 8-bit PPM")
    w, h = int(fields[1]), int(fields[2])
    body = data[pos:]
    if len(body) != w * h * 3:
        raise DataError("PPM payload size mismatch")
    return np.frombuffer(body, np.uint8).reshape(h, w, 3).copy()


def write_image(img: np.ndarray, path) -> Path:
    """PNG for ``.png`` paths, PPM otherwise."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(png_bytes(img) if path.suffix.lower() == ".png" else ppm_bytes(img))
    return path


def _check(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.dtype != np.uint8 or img.ndim != 3 or img.shape[2] != 3:
        raise DataError("image must be (H, W, 3) uint8")
    return np.ascontiguousarray(img)
