"""Network descriptions and the torch modules built from them.

A :class:`NetworkSpec` is a flat layer sequence. Encoder-decoder networks
push the output of layers flagged ``save`` onto a stack and add the most
recent saved activation into layers flagged ``merge`` (U-Net style additive
skips), which keeps the sequence flat while letting the decoder recover the
spatial detail lost in the bottleneck.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import torch
from torch import nn
from torch.nn import functional as F

from ..errors import ConfigurationError


@dataclass(frozen=True)
class LayerSpec:
    kind: str  # conv | relu | maxpool | res_down | res_up | head_map | head_vector
    in_channels: int = 0
    out_channels: int = 0
    kernel: int = 3
    stride: int = 1
    save: bool = False
    merge: bool = False


@dataclass(frozen=True)
class NetworkSpec:
    in_channels: int
    out_channels: int
    input_size: int | None  # square spatial size; None accepts any compatible size
    layers: tuple[LayerSpec, ...] = field(default_factory=tuple)

    @property
    def downsample(self) -> int:
        f = 1
        for layer in self.layers:
            if layer.kind in ("maxpool", "res_down") or (layer.kind == "conv" and layer.stride > 1):
                f *= 2 if layer.kind != "conv" else layer.stride
        return f

    def validate(self):
        ch = self.in_channels
        size = self.input_size
        depth = 0
        for i, layer in enumerate(self.layers):
            if layer.kind in ("relu", "maxpool"):
                if layer.kind == "maxpool" and size is not None:
                    size //= 2
            elif layer.kind in ("conv", "res_down", "res_up", "head_map", "head_vector"):
                if layer.in_channels != ch:
                    raise ConfigurationError(
                        f"layer {i} ({layer.kind}) expects {layer.in_channels} channels, gets {ch}",
                        field="network.layers",
                    )
                ch = layer.out_channels
                if size is not None:
                    if layer.kind == "res_down":
                        size //= 2
                    elif layer.kind == "res_up":
                        size *= 2
                    elif layer.kind == "conv":
                        size //= layer.stride
            else:
                raise ConfigurationError(f"unknown layer kind {layer.kind!r}", field="network.layers")
            if layer.save:
                depth += 1
            if layer.merge:
                depth -= 1
                if depth < 0:
                    raise ConfigurationError(f"layer {i} merges with no saved activation",
                                             field="network.layers")
        if ch != self.out_channels:
            raise ConfigurationError(
                f"last layer yields {ch} channels, spec declares {self.out_channels}",
                field="network.out_channels",
            )
        if self.input_size is not None and self.layers and self.layers[-1].kind == "head_map":
            if size != self.input_size:
                raise ConfigurationError(
                    f"spatial output {size} differs from input {self.input_size}",
                    field="network.layers",
                )


def encoder_decoder_spec(
    in_channels: int,
    out_channels: int,
    input_size: int | None = 128,
    widths: tuple[int, ...] = (32, 64, 128, 256, 256),
    head: str = "map",
    skips: bool = True,
) -> NetworkSpec:
    """Stem conv, one max-pool, four residual down blocks, five residual up blocks.

    ``widths`` are the stem width followed by the four down-block widths; the
    up path mirrors them. ``head="vector"`` replaces the decoder output with a
    global-average-pool + linear head producing ``out_channels`` values.
    """
    if len(widths) != 5:
        raise ConfigurationError("need 5 widths (stem + 4 down blocks)", field="network.widths")
    if input_size is not None and input_size % 32:
        raise ConfigurationError(f"input size {input_size} is not divisible by 32",
                                 field="map.resolution")
    stem, d1, d2, d3, d4 = widths
    layers = [
        LayerSpec("conv", in_channels, stem, 3, 1),
        LayerSpec("relu", save=skips),
        LayerSpec("maxpool", save=skips),
        LayerSpec("res_down", stem, d1, save=skips),
        LayerSpec("res_down", d1, d2, save=skips),
        LayerSpec("res_down", d2, d3, save=skips),
        LayerSpec("res_down", d3, d4),
    ]
    if head == "vector":
        layers.append(LayerSpec("head_vector", d4, out_channels, kernel=1))
        return NetworkSpec(in_channels, out_channels, input_size, tuple(_drop_saves(layers)))
    ups = [(d4, d3), (d3, d2), (d2, d1), (d1, stem), (stem, stem)]
    for u_in, u_out in ups:
        layers.append(LayerSpec("res_up", u_in, u_out, merge=skips))
    layers.append(LayerSpec("head_map", stem, out_channels, kernel=1))
    spec = NetworkSpec(in_channels, out_channels, input_size, tuple(layers))
    spec.validate()
    return spec


def _drop_saves(layers):
    return [LayerSpec(**{**l.__dict__, "save": False}) for l in layers]


def conv_stack_spec(channels: tuple[int, ...], kernel: int = 3) -> NetworkSpec:
    """Plain conv/ReLU chain ending in a 1x1-free conv; used for small checks."""
    layers = []
    for i in range(len(channels) - 1):
        layers.append(LayerSpec("conv", channels[i], channels[i + 1], kernel, 1))
        if i < len(channels) - 2:
            layers.append(LayerSpec("relu"))
    return NetworkSpec(channels[0], channels[-1], None, tuple(layers))


class ResidualDown(nn.Module):
    """Two 3x3 convs, the first with stride 2, plus a strided 1x1 projection skip."""

    def __init__(self, cin, cout):
        super().__init__()
        self.conv1 = nn.Conv2d(cin, cout, 3, stride=2, padding=1)
        self.conv2 = nn.Conv2d(cout, cout, 3, padding=1)
        self.skip = nn.Conv2d(cin, cout, 1, stride=2)

    def forward(self, x):
        y = self.conv2(F.relu(self.conv1(x)))
        return F.relu(y + self.skip(x))


class ResidualUp(nn.Module):
    """Nearest-neighbour x2 upsample, then two 3x3 convs with a 1x1 projection skip."""

    def __init__(self, cin, cout):
        super().__init__()
        self.conv1 = nn.Conv2d(cin, cout, 3, padding=1)
        self.conv2 = nn.Conv2d(cout, cout, 3, padding=1)
        self.skip = nn.Conv2d(cin, cout, 1)

    def forward(self, x, bridge=None):
        x = F.interpolate(x, scale_factor=2, mode="nearest")
        y = self.conv2(F.relu(self.conv1(x)))
        y = F.relu(y + self.skip(x))
        if bridge is not None:
            y = y + bridge
        return y


class VectorHead(nn.Module):
    def __init__(self, cin, cout):
        super().__init__()
        self.fc = nn.Linear(cin, cout)

    def forward(self, x):
        return self.fc(x.mean(dim=(2, 3)))


class Network(nn.Module):
    """Torch module realising a :class:`NetworkSpec`."""

    def __init__(self, spec: NetworkSpec, seed: int = 0):
        super().__init__()
        spec.validate()
        self.spec = spec
        mods = []
        for layer in spec.layers:
            if layer.kind == "conv":
                mods.append(nn.Conv2d(layer.in_channels, layer.out_channels, layer.kernel,
                                      stride=layer.stride, padding=layer.kernel // 2))
            elif layer.kind == "relu":
                mods.append(nn.ReLU())
            elif layer.kind == "maxpool":
                mods.append(nn.MaxPool2d(2))
            elif layer.kind == "res_down":
                mods.append(ResidualDown(layer.in_channels, layer.out_channels))
            elif layer.kind == "res_up":
                mods.append(ResidualUp(layer.in_channels, layer.out_channels))
            elif layer.kind == "head_map":
                mods.append(nn.Conv2d(layer.in_channels, layer.out_channels, 1))
            elif layer.kind == "head_vector":
                mods.append(VectorHead(layer.in_channels, layer.out_channels))
        self.layers = nn.ModuleList(mods)
        init_parameters(self, seed)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() != 4 or x.shape[1] != self.spec.in_channels:
            raise ConfigurationError(
                f"input shape {tuple(x.shape)} does not match {self.spec.in_channels} channels"
            )
        size = self.spec.input_size
        if size is not None and tuple(x.shape[2:]) != (size, size):
            raise ConfigurationError(f"input spatial size {tuple(x.shape[2:])} != ({size}, {size})")
        f = self.spec.downsample
        if x.shape[2] % f or x.shape[3] % f:
            raise ConfigurationError(f"spatial size {tuple(x.shape[2:])} not divisible by {f}")
        saved = []
        for layer, mod in zip(self.spec.layers, self.layers):
            if layer.merge:
                x = mod(x, saved.pop())
            else:
                x = mod(x)
            if layer.save:
                saved.append(x)
        return x


def init_parameters(module: nn.Module, seed: int) -> None:
    """He (fan-in) normal init for conv/linear weights, zero biases, from a fixed seed."""
    gen = torch.Generator().manual_seed(int(seed))
    with torch.no_grad():
        for m in module.modules():
            if isinstance(m, (nn.Conv2d, nn.Linear)):
                fan_in = m.weight[0].numel()
                m.weight.copy_(torch.randn(m.weight.shape, generator=gen) * math.sqrt(2.0 / fan_in))
                if m.bias is not None:
                    m.bias.zero_()


def build_network(spec: NetworkSpec, seed: int = 0) -> Network:
    return Network(spec, seed)
