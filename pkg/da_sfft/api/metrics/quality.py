import math

import torch

from da_sfft.api.errors import ShapeError
from da_sfft.api.tensor.ops import DTYPE, Padding, conv2d

PSNR_CAP = 99.0

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
DYNAMIC_RANGE = 1.0


def psnr(a: torch.Tensor, b: torch.Tensor) -> float:
    if a.shape != b.shape:
        raise ShapeError("PSNR operands differ in shape", a.shape, b.shape)

    error = float(((a.to(DTYPE) - b.to(DTYPE)) ** 2).mean())
    if error == 0.0:
        return PSNR_CAP

    return min(PSNR_CAP, 10.0 * math.log10(DYNAMIC_RANGE ** 2 / error))


def _window() -> torch.Tensor:
    offsets = torch.arange(SSIM_WINDOW, dtype=DTYPE) - (SSIM_WINDOW - 1) / 2
    g = torch.exp(-offsets ** 2 / (2 * SSIM_SIGMA ** 2))
    g = g / g.sum()
    return torch.outer(g, g)[None, None]


def _filter(x: torch.Tensor) -> torch.Tensor:
    return conv2d(x, _window(), padding=Padding.Valid)


# Single-scale SSIM per channel over valid window positions, averaged
def ssim(a: torch.Tensor, b: torch.Tensor) -> float:
    if a.shape != b.shape:
        raise ShapeError("SSIM operands differ in shape", a.shape, b.shape)

    if min(a.shape[-2:]) < SSIM_WINDOW:
        raise ShapeError("SSIM needs images of at least " + str(SSIM_WINDOW) + " pixels per side", a.shape)

    c1 = (SSIM_K1 * DYNAMIC_RANGE) ** 2
    c2 = (SSIM_K2 * DYNAMIC_RANGE) ** 2

    x = a.to(DTYPE).reshape(-1, 1, *a.shape[-2:])
    y = b.to(DTYPE).reshape(-1, 1, *b.shape[-2:])

    mu_x, mu_y = _filter(x), _filter(y)
    var_x = _filter(x * x) - mu_x * mu_x
    var_y = _filter(y * y) - mu_y * mu_y
    covariance = _filter(x * y) - mu_x * mu_y

    numerator = (2 * mu_x * mu_y + c1) * (2 * covariance + c2)
    denominator = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)

    return float((numerator / denominator).mean().clamp(-1.0, 1.0))
