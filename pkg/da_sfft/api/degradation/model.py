from typing import Optional

import torch
import torch.nn.functional as F

from da_sfft.api.degradation.kernels import gaussian_kernel, motion_kernel
from da_sfft.api.degradation.params import DegradationParams, RainLayerParams
from da_sfft.api.errors import ShapeError
from da_sfft.api.tensor.ops import Padding, Resample, conv2d, resize, tensor
from da_sfft.api.utils.seeding import SeedStream

# Offset added to depth before taking its reciprocal
DEPTH_OFFSET = 0.1

# Guard of the reciprocal-depth normalization; constant depth yields T == 1
NORMALIZATION_EPSILON = 1e-6


class TransmissionMap:
    # Per-pixel attenuation [1,H,W] in (0, 1]
    t: torch.Tensor

    def __init__(self, t: torch.Tensor):
        self.t = t


# Seeded Gaussian noise map clamped to [0, 1], before motion filtering
def rain_noise(shape: tuple[int, int], params: RainLayerParams) -> torch.Tensor:
    noise = SeedStream(params.layer_seed).normal(shape, "noise", mean=params.noise_mean, std=params.noise_std)
    return noise.clamp(0.0, 1.0).unsqueeze(0)


def make_rain_layer(shape: tuple[int, int], params: RainLayerParams) -> torch.Tensor:
    kernel = motion_kernel(params.motion_length, params.motion_angle)
    return conv2d(rain_noise(shape, params), kernel[None, None], padding=Padding.Same)


def transmission_map(depth: torch.Tensor, beta: float) -> TransmissionMap:
    if beta <= 0:
        raise ValueError("Beta must be positive, got " + str(beta))

    if not torch.isfinite(depth).all() or (depth < 0).any():
        raise ValueError("Depth map must be finite and non-negative")

    reciprocal = 1.0 / (depth + DEPTH_OFFSET)
    low = reciprocal.min()
    normalized = (reciprocal - low) / (reciprocal.max() - low + NORMALIZATION_EPSILON)

    return TransmissionMap(torch.exp(-beta * normalized))


# Channel-wise Gaussian blur with replicate borders
def blur(image: torch.Tensor, sigma: float) -> torch.Tensor:
    kernel = gaussian_kernel(sigma)

    if kernel.numel() == 1:
        return image

    radius = kernel.shape[-1] // 2
    padded = F.pad(image.unsqueeze(1), (radius, radius, radius, radius), mode="replicate")

    return conv2d(padded, kernel[None, None], padding=Padding.Valid)[:, 0]


# Downsamples so the shorter side equals the target, then resizes back to the working resolution
def rescale(image: torch.Tensor, down_target: int) -> torch.Tensor:
    height, width = image.shape[-2:]
    side = min(height, width)
    target = min(down_target, side)

    if target >= side:
        return image

    size = (max(1, round(height * target / side)), max(1, round(width * target / side)))
    down = resize(image, size, Resample.Bilinear, antialias=True)

    return resize(down, (height, width), Resample.Bilinear)


def degrade(image: torch.Tensor, depth: torch.Tensor, params: DegradationParams,
            transmission: Optional[TransmissionMap] = None) -> torch.Tensor:
    if image.dim() != 3 or image.shape[0] != 3:
        raise ShapeError("Expected RGB image [3,H,W]", image.shape)

    if depth.dim() != 3 or depth.shape[0] != 1 or depth.shape[-2:] != image.shape[-2:]:
        raise ShapeError("Depth map must be [1,H,W] matching the image", image.shape, depth.shape)

    x = rescale(blur(image, params.blur_sigma), params.down_target)
    shape = tuple(image.shape[-2:])

    for layer in params.rain_layers:
        x = x + make_rain_layer(shape, layer)

    if transmission is None:
        transmission = transmission_map(depth, params.beta)

    atmospheric = tensor(params.atmospheric).view(3, 1, 1)
    hazy = transmission.t * x + (1 - transmission.t) * atmospheric

    return hazy.clamp(0.0, 1.0)
