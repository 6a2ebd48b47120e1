import torch

from da_sfft.api.errors import ShapeError
from da_sfft.api.facegen.components import ComponentBox
from da_sfft.api.sfft.components import ComponentCrop, extract_components
from da_sfft.api.sfft.sff import SFF
from da_sfft.api.sfft.weights import AttentionStack, SFFStack, SFFTWeights
from da_sfft.api.tensor.modules import ConvLayer
from da_sfft.api.tensor.ops import Activation, Resample, channel_stats, pointwise, upsample

SFT_EPSILON = 1e-5


def sff_extract(crop: ComponentCrop, stack: SFFStack) -> SFF:
    return SFF.split(stack(torch.cat([crop.image, crop.mask], dim=-3)))


# Normalizes each channel of F and re-applies the statistics carried by sff
def sft_apply(features: torch.Tensor, sff: SFF, epsilon: float = SFT_EPSILON) -> torch.Tensor:
    if features.shape[-3] != sff.channels:
        raise ShapeError("SFF width does not match feature channels", features.shape, sff.scale.shape)

    mu, sigma = channel_stats(features)
    normalized = (features - mu[..., None, None]) / (sigma[..., None, None] + epsilon)

    return sff.scale[..., None, None] * normalized + sff.bias[..., None, None]


def facial_attention(features: list[torch.Tensor], stack: AttentionStack) -> list[torch.Tensor]:
    for f in features[1:]:
        if f.shape != features[0].shape:
            raise ShapeError("Component feature maps differ in shape", features[0].shape, f.shape)

    logits = stack(torch.cat(features, dim=-3))
    return list(pointwise(logits, Activation.Sigmoid).split(1, dim=-3))


def fuse_sff(features: list[torch.Tensor], maps: list[torch.Tensor], stack: SFFStack) -> SFF:
    if len(features) != len(maps):
        raise ShapeError("One attention map per component is required", (len(features),), (len(maps),))

    unified = sum(f * w for f, w in zip(features, maps))
    return SFF.split(stack(unified))


def phi(previous: torch.Tensor, factor: int, conv: ConvLayer) -> torch.Tensor:
    return conv(upsample(previous, factor, Resample.Bilinear))


def sfft_enhance(previous: torch.Tensor, y: SFF, w: SFF, factor: int, conv: ConvLayer) -> torch.Tensor:
    if y.channels != w.channels:
        raise ShapeError("Restoration and degradation SFF widths differ", y.scale.shape, w.scale.shape)

    return sft_apply(phi(previous, factor, conv), y + w)


# One scale level: component SFFs, attention fusion, then enhancement by the fused and DAFE statistics
def sfft_forward(previous: torch.Tensor, image: torch.Tensor, parsing: torch.Tensor, w: SFF,
                 weights: SFFTWeights, boxes: list[ComponentBox], factor: int) -> torch.Tensor:
    if len(boxes) != weights.components:
        raise ShapeError("One component box per SFF stack is required", (len(boxes),), (weights.components,))

    base = phi(previous, factor, weights.refine)
    if base.shape[-2:] != image.shape[-2:]:
        raise ShapeError("Scale image does not match the upsampled features", base.shape, image.shape)

    crops = extract_components(image, parsing, boxes)
    branches = [sft_apply(base, sff_extract(crop, stack)) for crop, stack in zip(crops, weights.component_stacks)]

    maps = facial_attention(branches, weights.attention)
    y = fuse_sff(branches, maps, weights.fusion)

    if y.channels != w.channels:
        raise ShapeError("Restoration and degradation SFF widths differ", y.scale.shape, w.scale.shape)

    return sft_apply(base, y + w)
