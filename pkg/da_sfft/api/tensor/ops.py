import enum
from typing import Optional, Sequence

import torch
import torch.nn.functional as F

from da_sfft.api.errors import ShapeError

DTYPE = torch.float64

# Keeps sigmoid outputs strictly inside (0, 1) where float64 would round to 0 or 1
SIGMOID_MARGIN = 1e-15


class Padding(enum.Enum):
    Same = "same"
    Valid = "valid"


class Activation(enum.Enum):
    Relu = "relu"
    Sigmoid = "sigmoid"

    @staticmethod
    def parse(value: str):
        return Activation(value.lower())


class Resample(enum.Enum):
    Nearest = "nearest"
    Bilinear = "bilinear"


def tensor(values, shape: Optional[Sequence[int]] = None) -> torch.Tensor:
    result = torch.as_tensor(values, dtype=DTYPE)

    if shape is not None:
        result = result.reshape(tuple(shape))

    return result


def _batched(x: torch.Tensor) -> tuple[torch.Tensor, bool]:
    if x.dim() == 3:
        return x.unsqueeze(0), True

    if x.dim() == 4:
        return x, False

    raise ShapeError("Expected [C,H,W] or [N,C,H,W] input", x.shape)


def conv2d(input: torch.Tensor, kernel: torch.Tensor, bias: Optional[torch.Tensor] = None,
           padding: Padding = Padding.Same, stride: int = 1) -> torch.Tensor:
    x, squeeze = _batched(input)

    if kernel.dim() != 4:
        raise ShapeError("Kernel must be [C_out,C_in,kH,kW]", kernel.shape)

    if kernel.shape[1] != x.shape[1]:
        raise ShapeError("Kernel input channels do not match input channels", input.shape, kernel.shape)

    if bias is not None and tuple(bias.shape) != (kernel.shape[0],):
        raise ShapeError("Bias must have one entry per output channel", bias.shape, kernel.shape)

    k_h, k_w = kernel.shape[-2:]

    match padding:
        case Padding.Same:
            if k_h % 2 == 0 or k_w % 2 == 0:
                raise ShapeError("Same padding requires odd kernel extents", kernel.shape)
            pad = (k_h // 2, k_w // 2)
        case Padding.Valid:
            if k_h > x.shape[-2] or k_w > x.shape[-1]:
                raise ShapeError("Kernel larger than input for valid padding", input.shape, kernel.shape)
            pad = (0, 0)
        case _:
            raise ValueError("Unknown padding " + str(padding))

    out = F.conv2d(x, kernel, bias, stride=stride, padding=pad)
    return out[0] if squeeze else out


def pointwise(input: torch.Tensor, fn: Activation) -> torch.Tensor:
    match fn:
        case Activation.Relu:
            return torch.relu(input)
        case Activation.Sigmoid:
            return torch.sigmoid(input).clamp(SIGMOID_MARGIN, 1.0 - SIGMOID_MARGIN)

    raise ValueError("Unknown activation " + str(fn))


def upsample(input: torch.Tensor, factor: int, mode: Resample = Resample.Nearest) -> torch.Tensor:
    if factor < 1:
        raise ValueError("Upsample factor must be >= 1, got " + str(factor))

    if factor == 1:
        return input

    x, squeeze = _batched(input)

    match mode:
        case Resample.Nearest:
            out = F.interpolate(x, scale_factor=factor, mode="nearest")
        case Resample.Bilinear:
            out = F.interpolate(x, scale_factor=factor, mode="bilinear", align_corners=False)
        case _:
            raise ValueError("Unknown resample mode " + str(mode))

    return out[0] if squeeze else out


# Resizes to an explicit (H, W); pixel centers at (i + 0.5) / n
def resize(input: torch.Tensor, size: tuple[int, int], mode: Resample = Resample.Bilinear,
           antialias: bool = False) -> torch.Tensor:
    x, squeeze = _batched(input)

    if tuple(x.shape[-2:]) == tuple(size):
        return input

    if mode is Resample.Nearest:
        out = F.interpolate(x, size=size, mode="nearest")
    else:
        out = F.interpolate(x, size=size, mode="bilinear", align_corners=False, antialias=antialias)

    return out[0] if squeeze else out


# Nearest-neighbour resize of an integer label map [H,W] or [N,H,W]
def resize_labels(labels: torch.Tensor, size: tuple[int, int]) -> torch.Tensor:
    if tuple(labels.shape[-2:]) == tuple(size):
        return labels

    batched = labels.dim() == 3
    x = labels.to(DTYPE).unsqueeze(1) if batched else labels.to(DTYPE)[None, None]
    out = F.interpolate(x, size=size, mode="nearest").round().to(labels.dtype)

    return out[:, 0] if batched else out[0, 0]


# Per-channel population mean and standard deviation over the two trailing spatial axes
def channel_stats(input: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    if input.dim() < 3:
        raise ShapeError("Expected [C,H,W] or [N,C,H,W] input", input.shape)

    flat = input.flatten(-2)

    if flat.shape[-1] < 1:
        raise ShapeError("Spatial extent must be at least 1x1", input.shape)

    constant = flat.amax(-1) == flat.amin(-1)
    mean = flat.mean(-1)

    # constant channels report their value exactly; the correction carries no gradient
    correction = torch.where(constant, flat[..., 0] - mean, torch.zeros_like(mean)).detach()
    mu = mean + correction

    var = ((flat - mu.unsqueeze(-1)) ** 2).mean(-1)
    positive = (var > 0) & ~constant
    safe_var = torch.where(positive, var, torch.ones_like(var))
    sigma = torch.where(positive, safe_var.sqrt(), torch.zeros_like(var))

    return mu, sigma


def mse(a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
    if a.shape != b.shape:
        raise ShapeError("MSE operands differ in shape", a.shape, b.shape)

    return ((a - b) ** 2).mean()


def global_average_pool(input: torch.Tensor) -> torch.Tensor:
    return input.mean(dim=(-2, -1))
