"""
A house, a glance, and the agent-centred map
============================================

Generates one procedural house, takes a few noise-free 90 degree views along
a short walk and projects them into the agent-centred semantic map. Images
land in ``demo_out/``.
"""

import math
from pathlib import Path

import numpy as np

from sscnav.perception import MapParams, ObservationHistory, ground_truth_ego_map, project_ego_map, raycast_observe
from sscnav.render import render_labels, render_map, render_trajectory, write_image
from sscnav.world import Pose, generate_world, geodesic_distance

out = Path("demo_out")
w = generate_world(7)
print("rooms:", [r.room_type for r in w.rooms])
print("objects:", len(w.objects), "grid", w.shape, "at", w.resolution, "m")
write_image(render_labels(w.labels, w.n_categories, scale=3), out / "house.png")

# start on a navigable cell and walk a few quarter-metre steps, turning a little each time
rng = np.random.default_rng(0)
cells = np.argwhere(w.navigable)
r, c = cells[rng.integers(len(cells))]
pose = Pose(*w.cell_center(r, c), 0.0)
history = ObservationHistory(5)
path = [pose]
for _ in range(5):
    history.push(raycast_observe(w, pose))
    step = Pose(pose.x + 0.25 * math.cos(pose.heading), pose.y + 0.25 * math.sin(pose.heading), pose.heading + 0.4)
    if w.is_navigable(step.x, step.y):
        pose = step
    else:
        pose = Pose(pose.x, pose.y, pose.heading + math.pi / 2)
    path.append(pose)

mp = MapParams(size=128)
seen = project_ego_map(history, pose, mp)
truth = ground_truth_ego_map(w, pose, mp)
print(f"observed {seen.observed.mean():.1%} of the window, ground truth knows {truth.observed.mean():.1%}")
write_image(render_map(seen, scale=3), out / "ego_observed.png")
write_image(render_map(truth, scale=3), out / "ego_truth.png")
write_image(render_trajectory(w, path, scale=3), out / "walk.png")

# geodesic versus straight-line distance to the far corner of the walk
far = w.cell_center(*cells[-1])
print(f"geodesic {geodesic_distance(w, (path[0].x, path[0].y), far):.2f} m, "
      f"straight {math.dist((path[0].x, path[0].y), far):.2f} m")
