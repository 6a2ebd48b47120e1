import math

import torch
from torch import nn

from da_sfft.api.tensor.ops import DTYPE, Padding, conv2d
from da_sfft.api.utils.seeding import SeedStream


# Parameter holder for a `same`-padded convolution
class ConvLayer(nn.Module):
    stride: int

    def __init__(self, in_channels: int, out_channels: int, kernel_size: int = 3, stride: int = 1):
        super().__init__()

        self.stride = stride
        self.weight = nn.Parameter(torch.zeros(out_channels, in_channels, kernel_size, kernel_size, dtype=DTYPE))
        self.bias = nn.Parameter(torch.zeros(out_channels, dtype=DTYPE))

    @property
    def out_channels(self) -> int:
        return self.weight.shape[0]

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return conv2d(x, self.weight, self.bias, Padding.Same, self.stride)


class LinearLayer(nn.Module):
    def __init__(self, in_features: int, out_features: int):
        super().__init__()

        self.weight = nn.Parameter(torch.zeros(out_features, in_features, dtype=DTYPE))
        self.bias = nn.Parameter(torch.zeros(out_features, dtype=DTYPE))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x @ self.weight.T + self.bias


# Kaiming-uniform weights from one named substream per parameter, zero biases
def initialize(module: nn.Module, stream: SeedStream, prefix: str = ""):
    with torch.no_grad():
        for name, param in sorted(module.named_parameters()):
            if name.endswith("bias"):
                param.zero_()
                continue

            bound = math.sqrt(6.0 / param[0].numel())
            param.copy_(stream.uniform(param.shape, "init", prefix + name, low=-bound, high=bound))


def set_frozen(module: nn.Module, frozen: bool):
    for param in module.parameters():
        param.requires_grad_(not frozen)
