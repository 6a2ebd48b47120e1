import torch

from da_sfft.api.errors import ShapeError
from da_sfft.api.facegen.components import COMPONENT_COUNT
from da_sfft.api.networks.modules import ConvTrunk
from da_sfft.api.tensor.ops import DTYPE, resize_labels

# Zero-based trunk blocks used for texture matching (the second to fourth blocks)
STYLE_LAYERS = (1, 2, 3)


def masked_gram(features: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    if features.shape[-2:] != mask.shape[-2:] or mask.shape[-3] != 1:
        raise ShapeError("Mask must be [1,H,W] over the feature grid", features.shape, mask.shape)

    flat = (features * mask).flatten(-2)
    count = mask.sum(dim=(-3, -2, -1)).clamp(min=1.0)

    return flat @ flat.transpose(-1, -2) / count[..., None, None]


# Sum over layers and parsing classes of the squared Frobenius distance between masked Gram matrices,
# averaged over the batch
def style_loss(hq: torch.Tensor, restored: torch.Tensor, parsing: torch.Tensor, extractor: ConvTrunk,
               layers: tuple[int, ...] = STYLE_LAYERS, classes: int = COMPONENT_COUNT) -> torch.Tensor:
    if hq.shape != restored.shape:
        raise ShapeError("Style loss operands differ in shape", hq.shape, restored.shape)

    real_features = extractor.features(hq)
    fake_features = extractor.features(restored)
    loss = torch.zeros((), dtype=DTYPE)

    for layer in layers:
        real, fake = real_features[layer], fake_features[layer]
        labels = resize_labels(parsing, tuple(real.shape[-2:]))

        for j in range(classes):
            mask = (labels == j).to(DTYPE).unsqueeze(-3)
            distance = ((masked_gram(fake, mask) - masked_gram(real, mask)) ** 2).sum(dim=(-2, -1))
            loss = loss + distance.mean()

    return loss
