"""Command-line entry point.

Exit status is 0 on success, 2 for configuration or usage errors and 3 for
failures while running. ``SSCNAV_THREADS`` sets the torch thread count.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import platform
import sys
from importlib import resources
from pathlib import Path

import numpy as np
import torch

from . import __version__
from .completion import (
    build_completion_dataset,
    calibration_report,
    completion_network,
    confidence_network,
    iou_report,
    load_dataset,
    majority_class,
    save_dataset,
    train_completion,
    train_confidence,
)
from .completion import TrainConfig
from .completion.model import complete_batch, confidence_batch
from .config import RunConfig, load_config, parse_config
from .episodes import (
    EnvConfig,
    RandomPolicy,
    compute_metrics,
    read_episode_log,
    run_episodes,
    sample_episodes,
    write_episode_log,
)
from .errors import CheckpointError, ConfigurationError, SSCNavError
from .nav import DQNConfig, NavAgent, NavTrainConfig, StateEncoder, q_network, train_nav, variant
from .nn import OptimizerConfig, load_checkpoint, save_checkpoint
from .perception import EgoSemMap, MapParams, SensorParams, load_map
from .render import (
    render_confidence,
    render_error_map,
    render_labels,
    render_map,
    render_qmap,
    render_trajectory,
    write_image,
)
from .world import Pose, generate_world, load_world, save_world
from .world.generate import WorldParams

log = logging.getLogger("sscnav")

RUN_DIRS = ("worlds", "data", "ckpt", "logs", "renders")


# ---------------------------------------------------------------- helpers

def eval_suite() -> dict:
    """The shipped held-out evaluation seeds."""
    text = resources.files("sscnav").joinpath("data/eval_seeds.json").read_text()
    return json.loads(text)


def world_params(cfg: RunConfig) -> WorldParams:
    w = cfg.world
    return WorldParams(width_m=w.width_m, height_m=w.height_m, min_rooms=w.min_rooms, max_rooms=w.max_rooms)


def sensor_params(cfg: RunConfig) -> SensorParams:
    s = cfg.sensor
    return SensorParams(fov_deg=s.fov_deg, range_m=s.range_m, n_rays=s.n_rays, p_noise=s.p_noise)


def map_params(cfg: RunConfig) -> MapParams:
    return MapParams(window_m=cfg.map.window_m, size=cfg.map.size, history=cfg.map.history)


def env_config(cfg: RunConfig) -> EnvConfig:
    return EnvConfig(sensor=sensor_params(cfg), map=map_params(cfg), max_steps=cfg.eval.max_steps)


def world_path(root, seed: int) -> Path:
    return Path(root) / f"world_{seed:06d}.bin"


def load_worlds(root) -> dict:
    root = Path(root)
    files = sorted(root.glob("world_*.bin"))
    if not files:
        raise ConfigurationError(f"no world files in {str(root)!r}", "worlds")
    worlds = [load_world(f) for f in files]
    return {w.seed: w for w in sorted(worlds, key=lambda w: w.seed)}


def _require_file(path, name: str) -> Path:
    if path is None:
        raise ConfigurationError("path is required", name)
    p = Path(path)
    if not p.is_file():
        raise ConfigurationError(f"no such file {str(p)!r}", name)
    return p


def _require_dir(path, name: str) -> Path:
    p = Path(path)
    if not p.is_dir():
        raise ConfigurationError(f"no such directory {str(p)!r}", name)
    return p


def _load_net(net, path, name: str):
    try:
        return load_checkpoint(net, path)
    except CheckpointError as e:
        raise ConfigurationError(f"checkpoint does not fit the configured network ({e})", name) from None


def completion_net(cfg: RunConfig, path=None):
    net = completion_network(12, cfg.map.size, cfg.completion.widths)
    return _load_net(net, path, "completion") if path is not None else net


def confidence_net(cfg: RunConfig, path=None):
    net = confidence_network(12, cfg.map.size, cfg.confidence.widths)
    return _load_net(net, path, "confidence") if path is not None else net


def _write_json(path, obj) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def _train_cfg(sec, seed: int, weighting=None) -> TrainConfig:
    return TrainConfig(steps=sec.steps, batch_size=sec.batch_size, optimizer=OptimizerConfig(lr=sec.lr),
                       seed=seed, eval_every=sec.eval_every, class_weighting=weighting)


# ---------------------------------------------------------------- stages

def do_worldgen(cfg: RunConfig, seed: int, count: int, out) -> list[Path]:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    params = world_params(cfg)
    paths = []
    for s in range(seed, seed + count):
        p = world_path(out, s)
        save_world(generate_world(s, params), p)
        paths.append(p)
    log.info("wrote %d worlds to %s", count, out)
    return paths


def do_collect(cfg: RunConfig, worlds_dir, out, val_out=None) -> None:
    worlds = list(load_worlds(worlds_dir).values())
    held = cfg.world.held_out if val_out is not None else 0
    if held >= len(worlds):
        raise ConfigurationError(f"{held} held-out worlds leave none of {len(worlds)} for training",
                                 "world.held_out")
    rng = np.random.default_rng([cfg.run.seed, 1])
    train_w, val_w = worlds[:len(worlds) - held], worlds[len(worlds) - held:]
    mp, sensor = map_params(cfg), sensor_params(cfg)
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    save_dataset(build_completion_dataset(train_w, cfg.data.anchors_per_world, rng, mp, sensor), out)
    if val_w:
        save_dataset(build_completion_dataset(val_w, cfg.data.anchors_per_world, rng, mp, sensor), val_out)


def _datasets(data, val):
    tr = load_dataset(_require_file(data, "data"))
    va = load_dataset(_require_file(val, "val")) if val is not None else None
    return tr, va


def _check_size(cfg: RunConfig, ds) -> None:
    if ds.size != cfg.map.size:
        raise ConfigurationError(f"dataset maps are {ds.size} cells but the config says {cfg.map.size}",
                                 "map.size")


def do_train_completion(cfg: RunConfig, data, val, out, log_out=None) -> dict:
    tr, va = _datasets(data, val)
    _check_size(cfg, tr)
    torch.manual_seed(cfg.run.seed)
    weighting = None if cfg.completion.class_weighting == "none" else cfg.completion.class_weighting
    res = train_completion(completion_net(cfg), tr, va, _train_cfg(cfg.completion, cfg.run.seed, weighting))
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    save_checkpoint(res.net, out)
    summary = {"history": res.history, "best": res.best_val, "best_step": res.best_step}
    if log_out is not None:
        _write_json(log_out, summary)
    return summary


def do_train_confidence(cfg: RunConfig, data, val, completion, out, log_out=None) -> dict:
    comp_path = _require_file(completion, "completion")
    tr, va = _datasets(data, val)
    _check_size(cfg, tr)
    cnet = completion_net(cfg, comp_path)
    res = train_confidence(confidence_net(cfg), cnet, tr, va, _train_cfg(cfg.confidence, cfg.run.seed + 1))
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    save_checkpoint(res.net, out)
    summary = {"history": res.history, "best": res.best_val, "best_step": res.best_step}
    if log_out is not None:
        _write_json(log_out, summary)
    return summary


def do_eval_completion(cfg: RunConfig, data, completion, confidence=None, out=None) -> dict:
    comp_path = _require_file(completion, "completion")
    conf_path = _require_file(confidence, "confidence") if confidence is not None else None
    ds = load_dataset(_require_file(data, "data"))
    _check_size(cfg, ds)
    net = completion_net(cfg, comp_path)
    rep = iou_report(net, ds, majority_class(ds))
    report = {k: {"mean": v["mean"], "per_category": {str(c): x for c, x in v["per_category"].items()}}
              for k, v in rep.items()}
    report["margin"] = rep["net"]["mean"] - max(rep["majority"]["mean"], rep["unknown"]["mean"])
    if conf_path is not None:
        report["calibration"] = calibration_report(confidence_net(cfg, conf_path), net, ds)
    if out is not None:
        _write_json(out, report)
    return report


def build_agent(cfg: RunConfig, variant_name: str, checkpoint=None, completion=None, confidence=None):
    """Agent for a variant; checkpoints are checked against the variant before any episode runs."""
    v = variant(variant_name)
    comp = conf = None
    if v.needs_completion_net:
        comp = completion_net(cfg, _require_file(completion, "completion"))
    if v.needs_confidence_net:
        conf = confidence_net(cfg, _require_file(confidence, "confidence"))
    q = q_network(12, cfg.map.size, v.action_mode, cfg.nav.widths)
    if checkpoint is not None:
        _load_net(q, _require_file(checkpoint, "checkpoint"), "variant")
    return NavAgent(StateEncoder(v, 12, comp, conf), q)


def do_train_nav(cfg: RunConfig, variant_name, worlds_dir, completion, confidence, out, log_out=None):
    agent = build_agent(cfg, variant_name, None, completion, confidence)
    worlds = load_worlds(_require_dir(worlds_dir, "worlds"))
    n = cfg.nav
    dqn = DQNConfig(gamma=n.gamma, batch_size=n.batch_size, buffer=n.buffer, sync_every=n.sync_every,
                    optimizer=OptimizerConfig(lr=n.lr))
    tcfg = NavTrainConfig(steps=n.steps, n_envs=n.n_envs, eps_start=n.eps_start, eps_end=n.eps_end,
                          eps_fraction=n.eps_fraction, learning_starts=n.learning_starts,
                          update_every=n.update_every, dqn=dqn, seed=cfg.run.seed)
    torch.manual_seed(cfg.run.seed)
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    if log_out is not None:
        Path(log_out).parent.mkdir(parents=True, exist_ok=True)
    return train_nav(agent, worlds, tcfg, env_config(cfg), log_out, out)


def eval_specs(cfg: RunConfig, episodes: int, worlds_dir=None):
    suite = eval_suite()
    if worlds_dir is not None:
        worlds = load_worlds(_require_dir(worlds_dir, "worlds"))
    else:
        seeds = cfg.eval.world_seeds or tuple(suite["world_seeds"])
        params = world_params(cfg)
        worlds = {s: generate_world(s, params) for s in seeds}
    seed = cfg.eval.episode_seed if cfg.eval.episode_seed >= 0 else suite["episode_seed"]
    specs = sample_episodes(list(worlds.values()), episodes, np.random.default_rng(seed))
    return worlds, specs


def do_eval(cfg: RunConfig, variant_name, episodes, checkpoint, completion, confidence, out,
            metrics_out=None, worlds_dir=None) -> dict:
    if variant_name == "random":
        policy = RandomPolicy("spatial", map_params(cfg))
    else:
        if checkpoint is None:
            raise ConfigurationError("a trained Q checkpoint is required", "checkpoint")
        policy = build_agent(cfg, variant_name, checkpoint, completion, confidence)
        policy.eps = cfg.eval.epsilon
    worlds, specs = eval_specs(cfg, episodes, worlds_dir)
    results = run_episodes(policy, worlds, specs, env_config(cfg), seed=cfg.run.seed, batch=cfg.eval.batch)
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    write_episode_log(out, specs, results)
    metrics = compute_metrics(list(zip(results, specs)), category_names=list(next(iter(worlds.values())).categories))
    metrics["variant"] = variant_name
    if metrics_out is not None:
        _write_json(metrics_out, metrics)
    return metrics


def _qmap(agent: NavAgent, m: EgoSemMap, goal: int) -> np.ndarray:
    agent.act([m], [goal], np.random.default_rng(0))
    q = agent.last_q[0]
    r = m.size
    return q.reshape(r, r) if q.size == r * r else np.broadcast_to(q.max(), (r, r)).copy()


def do_render_samples(cfg: RunConfig, data, completion, confidence, out_dir, count: int) -> list[Path]:
    """Input, target, completion, error and confidence images for the first samples of a dataset."""
    ds = load_dataset(_require_file(data, "data"))
    net = completion_net(cfg, _require_file(completion, "completion"))
    cnet = confidence_net(cfg, _require_file(confidence, "confidence")) if confidence else None
    n, scale = ds.n_categories, cfg.render.scale
    out_dir = Path(out_dir)
    paths = []
    with torch.no_grad():
        for k in range(min(count, len(ds))):
            inp, tgt = ds.inputs[k:k + 1], ds.targets[k:k + 1]
            logits = complete_batch(net, inp, n)
            pred = logits.argmax(dim=1).numpy()[0]
            target = EgoSemMap(tgt[0], tgt[0] != n, n)
            observed = inp[0] != n
            images = {
                "input": render_labels(inp[0], n, scale),
                "target": render_labels(tgt[0], n, scale),
                "completion": render_labels(np.where(observed, inp[0], pred), n, scale),
                "error": render_error_map(pred, target, observed, scale),
            }
            if cnet is not None:
                images["confidence"] = render_confidence(confidence_batch(cnet, inp, logits, n)[0], scale)
            for name, img in images.items():
                paths.append(write_image(img, out_dir / f"sample{k:02d}_{name}.png"))
    return paths


def do_render_episodes(cfg: RunConfig, episode_log, worlds: dict, out_dir, count: int, agent=None) -> list[Path]:
    rows = read_episode_log(_require_file(episode_log, "log"))
    out_dir = Path(out_dir)
    paths = []
    for row in rows[:count]:
        w = worlds[row["world_seed"]]
        poses = [Pose(*p) for p in row["poses"]]
        paths.append(write_image(render_trajectory(w, poses, cfg.render.scale),
                                 out_dir / f"trajectory_{row['episode']:04d}.png"))
        if agent is not None and poses:
            from .perception import ObservationHistory, project_ego_map, raycast_observe
            hist = ObservationHistory(cfg.map.history)
            hist.push(raycast_observe(w, poses[0], sensor_params(cfg)))
            m = project_ego_map(hist, poses[0], map_params(cfg), w.n_categories)
            paths.append(write_image(render_qmap(_qmap(agent, m, row["goal"]), cfg.render.scale),
                                     out_dir / f"qmap_{row['episode']:04d}.png"))
    return paths


# ---------------------------------------------------------------- pipeline

def _hash_tree(run: Path) -> dict:
    out = {}
    for sub in RUN_DIRS:
        for p in sorted((run / sub).rglob("*")):
            if p.is_file():
                out[p.relative_to(run).as_posix()] = hashlib.sha256(p.read_bytes()).hexdigest()
    return out


def run_pipeline(cfg: RunConfig, run_dir) -> dict:
    """worldgen, collect, both completion trainings, completion eval, nav training,
    evaluation of the trained variant and the random baseline, renders, manifest."""
    run = Path(run_dir)
    for sub in RUN_DIRS:
        (run / sub).mkdir(parents=True, exist_ok=True)
    v = cfg.nav.variant
    do_worldgen(cfg, cfg.world.first_seed, cfg.world.count, run / "worlds")
    do_collect(cfg, run / "worlds", run / "data/train.bin", run / "data/val.bin")
    val = run / "data/val.bin"
    do_train_completion(cfg, run / "data/train.bin", val, run / "ckpt/completion.ckpt",
                        run / "logs/completion.json")
    do_train_confidence(cfg, run / "data/train.bin", val, run / "ckpt/completion.ckpt",
                        run / "ckpt/confidence.ckpt", run / "logs/confidence.json")
    do_eval_completion(cfg, val, run / "ckpt/completion.ckpt", run / "ckpt/confidence.ckpt",
                       run / "logs/eval_completion.json")
    # nav trains on the training worlds only
    nav_worlds = run / "data/nav_worlds"
    nav_worlds.mkdir(exist_ok=True)
    train_seeds = sorted(load_worlds(run / "worlds"))[:cfg.world.count - cfg.world.held_out]
    for s in train_seeds:
        world_path(nav_worlds, s).write_bytes(world_path(run / "worlds", s).read_bytes())
    tag = v.replace("/", "").replace("-", "no")
    do_train_nav(cfg, v, nav_worlds, run / "ckpt/completion.ckpt", run / "ckpt/confidence.ckpt",
                 run / f"ckpt/nav_{tag}.ckpt", run / f"logs/nav_{tag}.jsonl")
    metrics = {}
    for name, ckpt in ((v, run / f"ckpt/nav_{tag}.ckpt"), ("random", None)):
        t = tag if ckpt is not None else "random"
        metrics[name] = do_eval(cfg, name, cfg.eval.episodes, ckpt, run / "ckpt/completion.ckpt",
                                run / "ckpt/confidence.ckpt", run / f"logs/episodes_{t}.jsonl",
                                run / f"logs/metrics_{t}.json")
    do_render_samples(cfg, val, run / "ckpt/completion.ckpt", run / "ckpt/confidence.ckpt",
                      run / "renders", cfg.render.samples)
    worlds, _ = eval_specs(cfg, cfg.eval.episodes)
    agent = build_agent(cfg, v, run / f"ckpt/nav_{tag}.ckpt", run / "ckpt/completion.ckpt",
                        run / "ckpt/confidence.ckpt")
    do_render_episodes(cfg, run / f"logs/episodes_{tag}.jsonl", worlds, run / "renders", cfg.render.samples, agent)
    manifest = {
        "config": cfg.to_ini(),
        "seeds": {"run": cfg.run.seed, "worlds": [cfg.world.first_seed, cfg.world.first_seed + cfg.world.count],
                  "eval": eval_suite() | {"override_world_seeds": list(cfg.eval.world_seeds)}},
        "versions": {"sscnav": __version__, "python": platform.python_version(), "numpy": np.__version__,
                     "torch": torch.__version__},
        "metrics": {k: {m: x[m] for m in ("success_rate", "spl", "episodes")} for k, x in metrics.items()},
        "artifacts": _hash_tree(run),
    }
    _write_json(run / "manifest.json", manifest)
    return manifest


def rerun_manifest(manifest_path, run_dir, verify: bool = True) -> dict:
    """Reproduce a run from its manifest; with ``verify`` every artifact hash must match."""
    old = json.loads(_require_file(manifest_path, "manifest").read_text())
    if "config" not in old:
        raise ConfigurationError("manifest has no config snapshot", "manifest")
    new = run_pipeline(parse_config(old["config"]), run_dir)
    if verify and new["artifacts"] != old["artifacts"]:
        diff = sorted(k for k in set(old["artifacts"]) | set(new["artifacts"])
                      if old["artifacts"].get(k) != new["artifacts"].get(k))
        raise SSCNavError(f"rerun differs in {len(diff)} artifacts, first {diff[:3]}")
    return new


# ---------------------------------------------------------------- argparse

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message, "arguments")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sscnav", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        c = sub.add_parser(name, help=help_)
        c.add_argument("--config", help="INI run configuration")
        return c

    c = cmd("worldgen", "generate worlds")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=int, default=1)
    c.add_argument("--out", required=True)

    c = cmd("collect", "build a completion dataset from a world directory")
    c.add_argument("--worlds", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--val-out", help="hold out the last world.held_out worlds into this file")

    for name in ("train-completion", "train-confidence"):
        c = cmd(name, f"{name.split('-')[1]} network training")
        c.add_argument("--data", required=True)
        c.add_argument("--val")
        c.add_argument("--out", required=True)
        c.add_argument("--log")
        if name == "train-confidence":
            c.add_argument("--completion", required=True)

    c = cmd("eval-completion", "IoU against baselines, plus calibration if a confidence net is given")
    c.add_argument("--data", required=True)
    c.add_argument("--completion", required=True)
    c.add_argument("--confidence")
    c.add_argument("--out")

    c = cmd("train-nav", "double-DQN training of a navigation variant")
    c.add_argument("--variant", default=None)
    c.add_argument("--worlds", required=True)
    c.add_argument("--completion")
    c.add_argument("--confidence")
    c.add_argument("--out", required=True)
    c.add_argument("--log")

    c = cmd("eval", "run the held-out episode suite")
    c.add_argument("--variant", default=None, help="variant name or 'random'")
    c.add_argument("--episodes", type=int, default=None)
    c.add_argument("--checkpoint")
    c.add_argument("--completion")
    c.add_argument("--confidence")
    c.add_argument("--worlds", help="use these worlds instead of the shipped seed list")
    c.add_argument("--out", required=True, help="episode log (JSON lines)")
    c.add_argument("--metrics")

    c = cmd("render", "draw a map, Q map, confidence map or trajectory")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--map", help="EgoSemMap file")
    src.add_argument("--qmap", help=".npy array of Q values")
    src.add_argument("--confidence", help=".npy array of confidences")
    src.add_argument("--trajectory", help="episode log; needs --world")
    c.add_argument("--world", help="world file for --trajectory")
    c.add_argument("--episode", type=int, default=0)
    c.add_argument("--scale", type=int, default=None)
    c.add_argument("--out", required=True)

    c = cmd("pipeline", "every stage into one run directory, or rerun a manifest")
    c.add_argument("--run", required=True)
    c.add_argument("--manifest", help="rerun this manifest and check artifact hashes")
    return p


def _config(args) -> RunConfig:
    return load_config(args.config) if args.config else RunConfig().validate()


def _render(args, cfg: RunConfig) -> None:
    scale = args.scale if args.scale is not None else cfg.render.scale
    if scale < 1:
        raise ConfigurationError("must be positive", "scale")
    if args.map:
        img = render_map(load_map(_require_file(args.map, "map")), scale)
    elif args.qmap:
        img = render_qmap(np.load(_require_file(args.qmap, "qmap")), scale)
    elif args.confidence:
        img = render_confidence(np.load(_require_file(args.confidence, "confidence")), scale)
    else:
        w = load_world(_require_file(args.world, "world"))
        rows = [r for r in read_episode_log(_require_file(args.trajectory, "trajectory"))
                if r["episode"] == args.episode]
        if not rows:
            raise ConfigurationError(f"episode {args.episode} not in log", "episode")
        if rows[0]["world_seed"] != w.seed:
            raise ConfigurationError(f"episode ran in world {rows[0]['world_seed']}, not {w.seed}", "world")
        img = render_trajectory(w, [Pose(*p) for p in rows[0]["poses"]], scale)
    write_image(img, args.out)


def dispatch(args) -> None:
    cfg = _config(args)
    c = args.command
    if c == "worldgen":
        if args.count < 1:
            raise ConfigurationError("must be positive", "count")
        do_worldgen(cfg, args.seed, args.count, args.out)
    elif c == "collect":
        do_collect(cfg, _require_dir(args.worlds, "worlds"), args.out, args.val_out)
    elif c == "train-completion":
        do_train_completion(cfg, args.data, args.val, args.out, args.log)
    elif c == "train-confidence":
        do_train_confidence(cfg, args.data, args.val, args.completion, args.out, args.log)
    elif c == "eval-completion":
        print(json.dumps(do_eval_completion(cfg, args.data, args.completion, args.confidence, args.out), indent=1))
    elif c == "train-nav":
        v = args.variant or cfg.nav.variant
        variant(v)
        do_train_nav(cfg, v, args.worlds, args.completion, args.confidence, args.out, args.log)
    elif c == "eval":
        v = args.variant or cfg.nav.variant
        if v != "random":
            variant(v)
        episodes = args.episodes if args.episodes is not None else cfg.eval.episodes
        if episodes < 1:
            raise ConfigurationError("must be positive", "episodes")
        m = do_eval(cfg, v, episodes, args.checkpoint, args.completion, args.confidence, args.out,
                    args.metrics, args.worlds)
        print(json.dumps({k: m[k] for k in ("variant", "episodes", "success_rate", "spl")}))
    elif c == "render":
        _render(args, cfg)
    elif c == "pipeline":
        if args.manifest:
            rerun_manifest(args.manifest, args.run)
        else:
            run_pipeline(cfg, args.run)


def _join_variant(argv) -> list[str]:
    # variant names such as -cf look like options to argparse
    out, it = [], iter(argv)
    for a in it:
        if a == "--variant":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--variant={nxt}")
        else:
            out.append(a)
    return out


def run_command(argv) -> int:
    try:
        args = build_parser().parse_args(_join_variant(list(argv)))
    except ConfigurationError as e:
        print(f"sscnav: error: {e}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    threads = os.environ.get("SSCNAV_THREADS")
    if threads:
        try:
            torch.set_num_threads(int(threads))
        except ValueError:
            print(f"sscnav: error: SSCNAV_THREADS: not an integer: {threads!r}", file=sys.stderr)
            return 2
    try:
        dispatch(args)
    except ConfigurationError as e:
        print(f"sscnav: error: {e}", file=sys.stderr)
        return 2
    except (SSCNavError, OSError) as e:
        print(f"sscnav: failed: {e}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
