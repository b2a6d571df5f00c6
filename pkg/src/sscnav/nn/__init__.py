"""Differentiable substrate for the completion, confidence and Q networks (torch-backed)."""

from .checkpoint import load_checkpoint, load_state, save_checkpoint, state_from_bytes, state_to_bytes
from .functional import backward, cross_entropy_masked, mse_masked, softmax
from .layers import (
    LayerSpec,
    Network,
    NetworkSpec,
    build_network,
    conv_stack_spec,
    encoder_decoder_spec,
    init_parameters,
)
from .optim import OptimizerConfig, make_optimizer, optimizer_step


def forward(net: Network, x):
    """Run ``net`` on ``x``; shape mismatches raise ConfigurationError."""
    return net(x)


__all__ = [
    "LayerSpec",
    "Network",
    "NetworkSpec",
    "OptimizerConfig",
    "backward",
    "build_network",
    "conv_stack_spec",
    "cross_entropy_masked",
    "encoder_decoder_spec",
    "forward",
    "init_parameters",
    "load_checkpoint",
    "load_state",
    "make_optimizer",
    "mse_masked",
    "optimizer_step",
    "save_checkpoint",
    "softmax",
    "state_from_bytes",
    "state_to_bytes",
]
