"""Run configuration: an INI file with one section per subsystem.

Every key is optional; unknown sections or keys are rejected so that typos
surface as errors naming the field instead of silently using a default.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigurationError
from .nav.state import variant as lookup_variant


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


@dataclass
class RunSection:
    seed: int = 0


@dataclass
class WorldSection:
    count: int = 200  # training worlds, seeds first_seed .. first_seed + count - 1
    first_seed: int = 0
    held_out: int = 20  # last worlds of the range, used for completion validation
    width_m: float = 10.0
    height_m: float = 8.0
    min_rooms: int = 4
    max_rooms: int = 7


@dataclass
class SensorSection:
    fov_deg: float = 90.0
    range_m: float = 4.0
    n_rays: int = 240
    p_noise: float = 0.0


@dataclass
class MapSection:
    window_m: float = 6.0
    size: int = 64
    history: int = 5


@dataclass
class DataSection:
    anchors_per_world: int = 25


@dataclass
class CompletionSection:
    widths: tuple[int, ...] = (16, 32, 64, 128, 128)
    steps: int = 6000
    batch_size: int = 16
    lr: float = 1e-3
    eval_every: int = 250
    class_weighting: str = "sqrt_inverse"  # or "none"


@dataclass
class ConfidenceSection:
    widths: tuple[int, ...] = (16, 32, 64, 128, 128)
    steps: int = 3000
    batch_size: int = 16
    lr: float = 1e-3
    eval_every: int = 250


@dataclass
class NavSection:
    variant: str = "full"
    widths: tuple[int, ...] = (8, 16, 32, 64, 64)
    steps: int = 20000
    n_envs: int = 8
    gamma: float = 0.99
    batch_size: int = 16
    buffer: int = 50000
    sync_every: int = 1000
    lr: float = 5e-4
    eps_start: float = 1.0
    eps_end: float = 0.05
    eps_fraction: float = 0.3
    learning_starts: int = 500
    update_every: int = 4


@dataclass
class EvalSection:
    episodes: int = 200
    world_seeds: tuple[int, ...] = ()  # empty: the shipped held-out list
    episode_seed: int = -1  # negative: the shipped value
    max_steps: int = 500
    batch: int = 16
    epsilon: float = 0.05  # exploration kept at evaluation, as at the end of training


@dataclass
class RenderSection:
    scale: int = 4
    samples: int = 4  # completion samples and trajectories to draw


@dataclass
class RunConfig:
    run: RunSection = field(default_factory=RunSection)
    world: WorldSection = field(default_factory=WorldSection)
    sensor: SensorSection = field(default_factory=SensorSection)
    map: MapSection = field(default_factory=MapSection)
    data: DataSection = field(default_factory=DataSection)
    completion: CompletionSection = field(default_factory=CompletionSection)
    confidence: ConfidenceSection = field(default_factory=ConfidenceSection)
    nav: NavSection = field(default_factory=NavSection)
    eval: EvalSection = field(default_factory=EvalSection)
    render: RenderSection = field(default_factory=RenderSection)

    def validate(self) -> "RunConfig":
        positive = [
            ("world.count", self.world.count), ("world.width_m", self.world.width_m),
            ("world.height_m", self.world.height_m), ("world.min_rooms", self.world.min_rooms),
            ("sensor.range_m", self.sensor.range_m), ("sensor.n_rays", self.sensor.n_rays),
            ("sensor.fov_deg", self.sensor.fov_deg), ("map.window_m", self.map.window_m),
            ("map.history", self.map.history), ("data.anchors_per_world", self.data.anchors_per_world),
            ("completion.steps", self.completion.steps), ("completion.batch_size", self.completion.batch_size),
            ("completion.lr", self.completion.lr), ("completion.eval_every", self.completion.eval_every),
            ("confidence.steps", self.confidence.steps), ("confidence.batch_size", self.confidence.batch_size),
            ("confidence.lr", self.confidence.lr), ("confidence.eval_every", self.confidence.eval_every),
            ("nav.steps", self.nav.steps), ("nav.n_envs", self.nav.n_envs), ("nav.batch_size", self.nav.batch_size),
            ("nav.buffer", self.nav.buffer), ("nav.sync_every", self.nav.sync_every), ("nav.lr", self.nav.lr),
            ("nav.update_every", self.nav.update_every), ("eval.episodes", self.eval.episodes),
            ("eval.max_steps", self.eval.max_steps), ("eval.batch", self.eval.batch),
            ("render.scale", self.render.scale),
        ]
        for name, value in positive:
            if not value > 0:
                raise ConfigurationError(f"must be positive, got {value}", name)
        if self.world.max_rooms < self.world.min_rooms:
            raise ConfigurationError("smaller than world.min_rooms", "world.max_rooms")
        if not 0 <= self.world.held_out < self.world.count:
            raise ConfigurationError("must leave at least one training world", "world.held_out")
        if not 0 <= self.sensor.p_noise <= 1:
            raise ConfigurationError("must lie in [0, 1]", "sensor.p_noise")
        if self.map.size % 16:
            raise ConfigurationError("must be a multiple of 16 (four poolings)", "map.size")
        for sec in ("completion", "confidence", "nav"):
            w = getattr(self, sec).widths
            if len(w) != 5 or min(w) < 1:
                raise ConfigurationError("need five positive channel widths", f"{sec}.widths")
        if self.completion.class_weighting not in ("none", "sqrt_inverse"):
            raise ConfigurationError("expected none or sqrt_inverse", "completion.class_weighting")
        if not 0 <= self.nav.gamma <= 1:
            raise ConfigurationError("must lie in [0, 1]", "nav.gamma")
        if not 0 <= self.eval.epsilon <= 1:
            raise ConfigurationError("must lie in [0, 1]", "eval.epsilon")
        for name in ("eps_start", "eps_end"):
            if not 0 <= getattr(self.nav, name) <= 1:
                raise ConfigurationError("must lie in [0, 1]", f"nav.{name}")
        if not 0 < self.nav.eps_fraction <= 1:
            raise ConfigurationError("must lie in (0, 1]", "nav.eps_fraction")
        if self.nav.learning_starts < 0:
            raise ConfigurationError("must be non-negative", "nav.learning_starts")
        try:
            lookup_variant(self.nav.variant)
        except ConfigurationError as e:
            raise ConfigurationError(str(e).split(": ", 1)[-1], "nav.variant") from None
        return self

    def to_ini(self) -> str:
        cp = configparser.ConfigParser()
        for sec in fields(self):
            part = getattr(self, sec.name)
            cp[sec.name] = {f.name: _fmt(getattr(part, f.name)) for f in fields(part)}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return ", ".join(str(x) for x in v)
    return repr(v) if isinstance(v, float) else str(v)


def _coerce(text: str, kind, name: str):
    try:
        if kind in (tuple, "tuple[int, ...]"):
            return _ints(text)
        if kind in (bool, "bool"):
            low = text.strip().lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(text)
            return low in ("true", "1", "yes")
        if kind in (int, "int"):
            return int(text)
        if kind in (float, "float"):
            return float(text)
        return text.strip()
    except ValueError:
        raise ConfigurationError(f"cannot parse {text!r} as {kind}", name) from None


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as e:
        raise ConfigurationError(f"malformed config: {e}", "config") from None
    cfg = RunConfig()
    sections = {f.name for f in fields(cfg)}
    for sec in cp.sections():
        if sec not in sections:
            raise ConfigurationError("unknown section", sec)
        part = getattr(cfg, sec)
        types = {f.name: f.type for f in fields(part)}
        updates = {}
        for key, raw in cp[sec].items():
            if key not in types:
                raise ConfigurationError("unknown key", f"{sec}.{key}")
            updates[key] = _coerce(raw, types[key], f"{sec}.{key}")
        setattr(cfg, sec, dataclasses.replace(part, **updates))
    return cfg.validate()


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"no such file {str(path)!r}", "config")
    return parse_config(path.read_text())
