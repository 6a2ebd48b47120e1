import torch

from da_sfft.api.errors import ShapeError
from da_sfft.api.tensor.ops import DTYPE


# Scale and bias statistics of one feature map, one entry per channel
class SFF:
    # [..., C]
    scale: torch.Tensor
    bias: torch.Tensor

    def __init__(self, scale: torch.Tensor, bias: torch.Tensor):
        if scale.shape != bias.shape:
            raise ShapeError("SFF scale and bias differ in shape", scale.shape, bias.shape)

        self.scale = scale
        self.bias = bias

    @property
    def channels(self) -> int:
        return self.scale.shape[-1]

    @staticmethod
    def split(vector: torch.Tensor) -> "SFF":
        if vector.shape[-1] % 2 != 0:
            raise ShapeError("SFF vector must have an even width", vector.shape)

        channels = vector.shape[-1] // 2
        return SFF(vector[..., :channels], vector[..., channels:])

    @staticmethod
    def zeros(channels: int, batch: tuple = ()) -> "SFF":
        return SFF(torch.zeros(*batch, channels, dtype=DTYPE), torch.zeros(*batch, channels, dtype=DTYPE))

    def __add__(self, other: "SFF") -> "SFF":
        if self.channels != other.channels:
            raise ShapeError("SFF channel widths differ", self.scale.shape, other.scale.shape)

        return SFF(self.scale + other.scale, self.bias + other.bias)

    def __repr__(self):
        return "SFF(channels=" + str(self.channels) + ")"
