"""Completion training data from random exploration with randomly removed views.

A random-walk agent collects observations; at every anchor pose the target
map comes from the world itself and four inputs are rasterized from random
subsets of the last five views. The subsets of one anchor are nested (all are
prefixes of a single random permutation), so an input built from fewer views
never observes more than one built from more.
"""

from __future__ import annotations

import io
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DataError
from ..perception import (
    EgoSemMap,
    MapParams,
    ObservationHistory,
    SensorParams,
    ground_truth_ego_map,
    map_from_bytes,
    map_to_bytes,
    project_ego_map,
    raycast_observe,
)
from ..world.core import Pose, World
from ..world.motion import sweep

VIEWS = 5
INPUTS_PER_ANCHOR = 4


@dataclass
class CompletionSample:
    input: EgoSemMap
    target: EgoSemMap
    pose: Pose
    world_seed: int = -1
    views: int = 0


class CompletionDataset:
    """Column store of completion samples (labels only; masks are ``labels != N``)."""

    def __init__(self, inputs, targets, poses, world_seeds, views, n_categories: int):
        self.inputs = np.asarray(inputs, dtype=np.uint8)
        self.targets = np.asarray(targets, dtype=np.uint8)
        self.poses = np.asarray(poses, dtype=np.float64).reshape(-1, 3)
        self.world_seeds = np.asarray(world_seeds, dtype=np.int64)
        self.views = np.asarray(views, dtype=np.uint8)
        self.n_categories = n_categories

    def __len__(self):
        return len(self.inputs)

    @property
    def size(self) -> int:
        return self.inputs.shape[1]

    def __getitem__(self, k) -> CompletionSample:
        n = self.n_categories
        inp, tgt = self.inputs[k], self.targets[k]
        return CompletionSample(
            EgoSemMap(inp.copy(), inp != n, n),
            EgoSemMap(tgt.copy(), tgt != n, n),
            Pose(*self.poses[k]),
            int(self.world_seeds[k]),
            int(self.views[k]),
        )

    def subset(self, idx) -> "CompletionDataset":
        idx = np.asarray(idx)
        return CompletionDataset(self.inputs[idx], self.targets[idx], self.poses[idx],
                                 self.world_seeds[idx], self.views[idx], self.n_categories)

    def input_observed(self, idx=slice(None)):
        return self.inputs[idx] != self.n_categories

    def target_observed(self, idx=slice(None)):
        return self.targets[idx] != self.n_categories

    def loss_mask(self, idx=slice(None)):
        """Unobserved in the input but observed in the target."""
        return (self.inputs[idx] == self.n_categories) & (self.targets[idx] != self.n_categories)

    @classmethod
    def concat(cls, parts) -> "CompletionDataset":
        parts = [p for p in parts if len(p)]
        if not parts:
            raise DataError("nothing to concatenate")
        return cls(
            np.concatenate([p.inputs for p in parts]),
            np.concatenate([p.targets for p in parts]),
            np.concatenate([p.poses for p in parts]),
            np.concatenate([p.world_seeds for p in parts]),
            np.concatenate([p.views for p in parts]),
            parts[0].n_categories,
        )


def random_walk_step(w: World, pose: Pose, rng: np.random.Generator, step_m: float = 0.25) -> Pose:
    heading = pose.heading + rng.uniform(-math.pi / 3, math.pi / 3)
    new, moved = sweep(w, pose, heading, step_m)
    if moved < step_m / 2:
        # bumped into something: turn around at random
        new = Pose(new.x, new.y, heading + math.pi + rng.uniform(-math.pi / 2, math.pi / 2))
    return new


def random_navigable_pose(w: World, rng: np.random.Generator) -> Pose:
    cells = np.argwhere(w.navigable)
    r, c = cells[int(rng.integers(len(cells)))]
    x, y = w.cell_center(int(r), int(c))
    return Pose(x, y, float(rng.uniform(0, 2 * math.pi)))


def collect_world_samples(w: World, anchors: int, rng: np.random.Generator,
                          mp: MapParams | None = None, sensor: SensorParams | None = None,
                          stride: int = VIEWS, max_views: int = INPUTS_PER_ANCHOR,
                          inputs_per_anchor: int = INPUTS_PER_ANCHOR) -> CompletionDataset:
    mp = mp or MapParams()
    sensor = sensor or SensorParams()
    n = w.n_categories
    pose = random_navigable_pose(w, rng)
    views: list = []
    inputs, targets, poses, ks = [], [], [], []
    steps = 0
    while len(targets) < anchors * inputs_per_anchor:
        pose = random_walk_step(w, pose, rng) if steps else pose
        views.append(raycast_observe(w, pose, sensor, rng))
        views = views[-VIEWS:]
        steps += 1
        if len(views) < VIEWS or (steps - VIEWS) % stride:
            continue
        target = ground_truth_ego_map(w, pose, mp)
        perm = rng.permutation(VIEWS)
        for _ in range(inputs_per_anchor):
            k = int(rng.integers(1, max_views + 1))
            hist = ObservationHistory(VIEWS)
            for i in sorted(perm[:k]):
                hist.push(views[i])
            inp = project_ego_map(hist, pose, mp, n)
            inputs.append(inp.labels)
            targets.append(target.labels)
            poses.append((pose.x, pose.y, pose.heading))
            ks.append(k)
    m = len(targets)
    return CompletionDataset(np.stack(inputs), np.stack(targets), np.array(poses),
                             np.full(m, w.seed), np.array(ks), n)


def build_completion_dataset(worlds, anchors_per_world: int, rng: np.random.Generator,
                             mp: MapParams | None = None, sensor: SensorParams | None = None
                             ) -> CompletionDataset:
    """Four samples per anchor, ``anchors_per_world`` anchors in every world."""
    if not worlds:
        raise DataError("need at least one world")
    parts = [collect_world_samples(w, anchors_per_world, rng, mp, sensor) for w in worlds]
    return CompletionDataset.concat(parts)


def split_by_world(ds: CompletionDataset, held_out_seeds) -> tuple[CompletionDataset, CompletionDataset]:
    held = np.isin(ds.world_seeds, np.asarray(list(held_out_seeds)))
    return ds.subset(np.flatnonzero(~held)), ds.subset(np.flatnonzero(held))


# -- file format ------------------------------------------------------------
#   b"SSCDS1", u32 count, u64 offsets[count] (from start of file)
#   record: i64 world seed, u8 views, 3 x f64 pose, u32 len + input map, u32 len + target map

DS_MAGIC = b"SSCDS1"


def dataset_to_bytes(ds: CompletionDataset) -> bytes:
    records = []
    for k in range(len(ds)):
        s = ds[k]
        a, b = map_to_bytes(s.input), map_to_bytes(s.target)
        records.append(struct.pack("<qB3d", s.world_seed, s.views, s.pose.x, s.pose.y, s.pose.heading)
                       + struct.pack("<I", len(a)) + a + struct.pack("<I", len(b)) + b)
    head = len(DS_MAGIC) + 4 + 8 * len(records)
    offsets, pos = [], head
    for r in records:
        offsets.append(pos)
        pos += len(r)
    buf = io.BytesIO()
    buf.write(DS_MAGIC + struct.pack("<I", len(records)))
    buf.write(np.asarray(offsets, dtype="<u8").tobytes())
    for r in records:
        buf.write(r)
    return buf.getvalue()


def dataset_from_bytes(data: bytes) -> CompletionDataset:
    if data[:len(DS_MAGIC)] != DS_MAGIC:
        raise DataError("not a completion dataset (bad magic)")
    try:
        (count,) = struct.unpack_from("<I", data, len(DS_MAGIC))
        offsets = np.frombuffer(data, "<u8", count, len(DS_MAGIC) + 4)
        inputs, targets, poses, seeds, views = [], [], [], [], []
        n = None
        for off in offsets.tolist():
            seed, k, x, y, h = struct.unpack_from("<qB3d", data, off)
            off += struct.calcsize("<qB3d")
            (la,) = struct.unpack_from("<I", data, off)
            a = map_from_bytes(data[off + 4:off + 4 + la])
            off += 4 + la
            (lb,) = struct.unpack_from("<I", data, off)
            b = map_from_bytes(data[off + 4:off + 4 + lb])
            inputs.append(a.labels)
            targets.append(b.labels)
            poses.append((x, y, h))
            seeds.append(seed)
            views.append(k)
            n = a.n_categories
    except struct.error as exc:
        raise DataError(f"completion dataset truncated: {exc}") from exc
    if not inputs:
        raise DataError("empty completion dataset")
    return CompletionDataset(np.stack(inputs), np.stack(targets), np.array(poses), np.array(seeds),
                             np.array(views), n)


def save_dataset(ds: CompletionDataset, path) -> None:
    Path(path).write_bytes(dataset_to_bytes(ds))


def load_dataset(path) -> CompletionDataset:
    return dataset_from_bytes(Path(path).read_bytes())
