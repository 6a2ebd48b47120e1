import math

import numpy as np
import torch

from da_sfft.api.tensor.ops import DTYPE, tensor

# Sub-pixel samples along a motion segment, per pixel of length
SAMPLES_PER_PIXEL = 8


# Normalized isotropic Gaussian, side 2 * ceil(3 * sigma) + 1
def gaussian_kernel(sigma: float) -> torch.Tensor:
    if sigma < 0:
        raise ValueError("Blur sigma must be non-negative, got " + str(sigma))

    if sigma == 0:
        return tensor([[1.0]])

    radius = math.ceil(3 * sigma)
    offsets = torch.arange(-radius, radius + 1, dtype=DTYPE)
    yy, xx = torch.meshgrid(offsets, offsets, indexing="ij")

    kernel = torch.exp(-(xx ** 2 + yy ** 2) / (2 * sigma ** 2))
    return kernel / kernel.sum()


def _snap(value: float) -> float:
    value = round(value, 12)
    return 0.0 if abs(value) < 1e-12 else value


# Line segment through the kernel center, anti-aliased by bilinear splatting of dense samples.
# Angles are counter-clockwise from the x axis; image rows grow downwards.
def motion_kernel(length: int, angle_deg: float) -> torch.Tensor:
    if length < 1:
        raise ValueError("Motion length must be >= 1, got " + str(length))

    if length == 1:
        return tensor([[1.0]])

    theta = math.radians(angle_deg)
    dx = _snap(math.cos(theta))
    dy = -_snap(math.sin(theta))

    center = (length - 1) / 2
    t = np.linspace(-center, center, SAMPLES_PER_PIXEL * length)
    xs = center + t * dx
    ys = center + t * dy

    x0 = np.floor(xs).astype(np.int64)
    y0 = np.floor(ys).astype(np.int64)
    fx = xs - x0
    fy = ys - y0

    kernel = np.zeros((length, length))

    for rows, cols, weights in ((y0, x0, (1 - fy) * (1 - fx)), (y0, x0 + 1, (1 - fy) * fx),
                                (y0 + 1, x0, fy * (1 - fx)), (y0 + 1, x0 + 1, fy * fx)):
        valid = (weights > 0) & (rows >= 0) & (rows < length) & (cols >= 0) & (cols < length)
        np.add.at(kernel, (rows[valid], cols[valid]), weights[valid])

    return torch.from_numpy(kernel / kernel.sum())
