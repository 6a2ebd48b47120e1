import torch

from da_sfft.api.networks.forward import discriminator_forward, downscale
from da_sfft.api.networks.modules import DISCRIMINATOR_SCALES
from da_sfft.api.networks.state import ModelState
from da_sfft.api.tensor.ops import mse


# Returns (pixel term, feature-matching term)
def reconstruction_terms(hq: torch.Tensor, restored: torch.Tensor,
                         state: ModelState) -> tuple[torch.Tensor, torch.Tensor]:
    pixel = mse(hq, restored)
    feature = torch.zeros((), dtype=pixel.dtype)

    for s in DISCRIMINATOR_SCALES:
        _, real = discriminator_forward(downscale(hq, s), s, state)
        _, fake = discriminator_forward(downscale(restored, s), s, state)

        for real_layer, fake_layer in zip(real, fake):
            feature = feature + mse(real_layer, fake_layer)

    return pixel, feature


def reconstruction_loss(hq: torch.Tensor, restored: torch.Tensor, state: ModelState) -> torch.Tensor:
    pixel, feature = reconstruction_terms(hq, restored, state)
    return pixel + feature
