"""Geodesic distances on the 8-connected navigable grid.

Path lengths are sums of axis steps (one cell) and diagonal steps (sqrt(2)
cells). scipy's Dijkstra returns floating sums whose last bits depend on the
order edges were added along the chosen path, so point queries are snapped
back onto the lattice ``a + b*sqrt(2)`` and re-evaluated in one canonical
form. That makes two correct shortest-path routines agree bit for bit.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..errors import NotFoundError
from .core import ObjectInstance, World

SQRT2 = math.sqrt(2.0)
_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def octile_length(axis_steps: int, diagonal_steps: int, resolution: float) -> float:
    return (axis_steps + diagonal_steps * SQRT2) * resolution


def snap_octile(d_cells: float) -> tuple[int, int]:
    """Decompose a path length in cells into (axis steps, diagonal steps)."""
    if not math.isfinite(d_cells):
        raise ValueError("cannot snap an infinite distance")
    b = np.arange(int(d_cells / SQRT2) + 2)
    a = np.rint(d_cells - b * SQRT2)
    err = np.abs(a + b * SQRT2 - d_cells)
    err[a < 0] = np.inf
    k = int(np.argmin(err))
    return int(a[k]), int(b[k])


def _graph(w: World):
    if "graph" not in w._cache:
        h, wd = w.shape
        nav = w.navigable
        index = np.full((h, wd), -1, dtype=np.int64)
        index[nav] = np.arange(int(nav.sum()))
        rows, cols, weights = [], [], []
        for dr, dc in _OFFSETS:
            src = nav[max(0, -dr):h - max(0, dr), max(0, -dc):wd - max(0, dc)]
            dst = nav[max(0, dr):h - max(0, -dr), max(0, dc):wd - max(0, -dc)]
            ok = src & dst
            i_src = index[max(0, -dr):h - max(0, dr), max(0, -dc):wd - max(0, dc)][ok]
            i_dst = index[max(0, dr):h - max(0, -dr), max(0, dc):wd - max(0, -dc)][ok]
            rows.append(i_src)
            cols.append(i_dst)
            weights.append(np.full(len(i_src), SQRT2 if dr and dc else 1.0))
        n = int(nav.sum())
        g = csr_matrix(
            (np.concatenate(weights), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
        )
        w._cache["graph"] = (index, g)
    return w._cache["graph"]


def distance_field(w: World, source_cells) -> np.ndarray:
    """Geodesic distance in meters from the nearest of ``source_cells`` to every cell.

    Non-navigable and unreachable cells hold ``inf``.
    """
    index, g = _graph(w)
    src = np.asarray(source_cells, dtype=np.int64).reshape(-1, 2)
    ids = index[src[:, 0], src[:, 1]]
    ids = np.unique(ids[ids >= 0])
    out = np.full(w.shape, np.inf)
    if len(ids) == 0:
        return out
    d = dijkstra(g, directed=False, indices=ids, min_only=True)
    out[index >= 0] = d[index[index >= 0]] * w.resolution
    return out


def _navigable_cell(w: World, p, what="point"):
    r, c = w.cell_of(*p)
    if not w.in_bounds(r, c) or not w.navigable[r, c]:
        raise ValueError(f"{what} {tuple(p)} is not navigable")
    return r, c


def _cells_distance(w: World, field_cells: float) -> float:
    if not math.isfinite(field_cells):
        return math.inf
    a, b = snap_octile(field_cells)
    return octile_length(a, b, w.resolution)


def geodesic_distance(w: World, a, b) -> float:
    """Shortest 8-connected navigable path length between the cells holding ``a`` and ``b``.

    Returns ``math.inf`` when ``b`` is unreachable or not navigable. Raises
    ValueError when ``a`` is not navigable.
    """
    ra, ca = _navigable_cell(w, a)
    rb, cb = w.cell_of(*b)
    if not w.in_bounds(rb, cb) or not w.navigable[rb, cb]:
        return math.inf
    field = _source_field_cells(w, (ra, ca))
    return _cells_distance(w, field[rb, cb])


def _source_field_cells(w: World, cell) -> np.ndarray:
    """Distances in cells from one source cell, cached per source."""
    cache = w._cache.setdefault("src_fields", {})
    if cell not in cache:
        index, g = _graph(w)
        d = dijkstra(g, directed=False, indices=int(index[cell]))
        f = np.full(w.shape, np.inf)
        f[index >= 0] = d[index[index >= 0]]
        if len(cache) > 64:
            cache.clear()
        cache[cell] = f
    return cache[cell]


def adjacent_cells(w: World, obj: ObjectInstance) -> np.ndarray:
    """Navigable cells 8-adjacent to an instance footprint."""
    h, wd = w.shape
    mask = np.zeros(w.shape, dtype=bool)
    for dr, dc in _OFFSETS:
        rr = obj.footprint[:, 0] + dr
        cc = obj.footprint[:, 1] + dc
        ok = (rr >= 0) & (rr < h) & (cc >= 0) & (cc < wd)
        mask[rr[ok], cc[ok]] = True
    mask &= w.navigable
    return np.argwhere(mask)


def instance_distance(w: World, p, k: int) -> float:
    """Geodesic meters from ``p`` to the closest navigable cell next to instance ``k``."""
    r, c = _navigable_cell(w, p)
    field = _source_field_cells(w, (r, c))
    adj = adjacent_cells(w, w.objects[k])
    if len(adj) == 0:
        return math.inf
    return _cells_distance(w, float(field[adj[:, 0], adj[:, 1]].min()))


def nearest_instance(w: World, p, category: int) -> tuple[ObjectInstance, float]:
    """Instance of ``category`` with the smallest geodesic distance from ``p``.

    Ties go to the lowest instance index. Raises NotFoundError if the world
    has no instance of ``category``.
    """
    ids = w.instances_of(category)
    if not ids:
        raise NotFoundError(f"no instance of category {category} in world {w.seed}")
    best_k, best_d = ids[0], math.inf
    for k in ids:
        d = instance_distance(w, p, k)
        if d < best_d:
            best_k, best_d = k, d
    return w.objects[best_k], best_d


def target_field(w: World, category: int) -> np.ndarray:
    """Geodesic meters from every cell to the nearest instance of ``category``."""
    cache = w._cache.setdefault("target_fields", {})
    if category not in cache:
        cells = [adjacent_cells(w, w.objects[k]) for k in w.instances_of(category)]
        cells = np.concatenate(cells) if cells else np.zeros((0, 2), dtype=np.int64)
        cache[category] = distance_field(w, cells)
    return cache[category]
