import enum
from typing import Optional

import torch

from da_sfft.api.errors import ShapeError
from da_sfft.api.facegen.components import component_boxes
from da_sfft.api.networks.modules import DISCRIMINATOR_SCALES
from da_sfft.api.networks.state import ModelState
from da_sfft.api.sfft.layers import sfft_forward
from da_sfft.api.sfft.sff import SFF
from da_sfft.api.tensor.ops import Activation, Resample, pointwise, resize, resize_labels


class GeneratorMode(enum.Enum):
    # Degradation statistics come from the HQ encoder on the ground truth
    Train = "train"
    # Degradation statistics come from the LQ encoder on the input
    Infer = "infer"


class EncoderKind(enum.Enum):
    HQ = "hq"
    LQ = "lq"


# Record of one generator pass; the autograd graph of its output is the gradient tape
class ForwardTape:
    encoder_calls: list[EncoderKind]

    # DAFE statistics w^i per scale
    degradation_sffs: list[SFF]

    def __init__(self):
        self.encoder_calls = []
        self.degradation_sffs = []


def encoder_forward(x: torch.Tensor, which: EncoderKind, state: ModelState,
                    tape: Optional[ForwardTape] = None) -> torch.Tensor:
    if x.shape[-1] != state.config.resolution or x.shape[-2] != state.config.resolution:
        raise ShapeError("Encoder input must be at the model resolution", x.shape)

    if tape is not None:
        tape.encoder_calls.append(which)

    match which:
        case EncoderKind.HQ:
            return state.hq_encoder(x)
        case EncoderKind.LQ:
            return state.subnetwork("lq_encoder")(x)

    raise ValueError("Unknown encoder " + str(which))


def fc_head(v: torch.Tensor, state: ModelState, scale: int) -> SFF:
    return SFF.split(state.subnetwork("fc_heads")[scale](v))


# Bilinear downscaling by s, as seen by the discriminator of that scale
def downscale(x: torch.Tensor, s: float) -> torch.Tensor:
    if s == 1.0:
        return x

    height, width = x.shape[-2:]
    return resize(x, (max(1, round(height * s)), max(1, round(width * s))), Resample.Bilinear, antialias=True)


def discriminator_forward(x: torch.Tensor, s: float, state: ModelState) -> tuple[torch.Tensor, list[torch.Tensor]]:
    if s not in DISCRIMINATOR_SCALES:
        raise ValueError("No discriminator for scale " + str(s))

    return state.discriminators[DISCRIMINATOR_SCALES.index(s)](x)


def _degradation_sffs(lq: torch.Tensor, hq: Optional[torch.Tensor], state: ModelState, mode: GeneratorMode,
                      tape: ForwardTape) -> list[SFF]:
    batch = tuple(lq.shape[:-3])

    if not state.mode.uses_dafe:
        return [SFF.zeros(c, batch) for c in state.config.channels]

    match mode:
        case GeneratorMode.Train:
            if hq is None:
                raise ValueError("Train mode needs the HQ image")
            v = encoder_forward(hq, EncoderKind.HQ, state, tape)
        case GeneratorMode.Infer:
            v = encoder_forward(lq, EncoderKind.LQ, state, tape)
        case _:
            raise ValueError("Unknown generator mode " + str(mode))

    return [fc_head(v, state, i) for i in range(state.config.scales)]


def generator_forward(lq: torch.Tensor, parsing: torch.Tensor, state: ModelState, mode: GeneratorMode,
                      hq: Optional[torch.Tensor] = None) -> tuple[torch.Tensor, ForwardTape]:
    state.require_initialized()
    config = state.config

    if tuple(lq.shape[-3:]) != (3, config.resolution, config.resolution):
        raise ShapeError("Generator input must be RGB at resolution " + str(config.resolution), lq.shape)

    if tuple(parsing.shape) != tuple(lq.shape[:-3]) + tuple(lq.shape[-2:]):
        raise ShapeError("Parsing map does not match the input", lq.shape, parsing.shape)

    tape = ForwardTape()
    tape.degradation_sffs = _degradation_sffs(lq, hq, state, mode, tape)

    boxes = component_boxes()[:state.mode.components]
    features = state.generator.start.expand(*lq.shape[:-3], *state.generator.start.shape)

    for i, weights in enumerate(state.generator.scales):
        size = (config.scale_resolution(i), config.scale_resolution(i))
        image = resize(lq, size, Resample.Bilinear, antialias=True)
        labels = resize_labels(parsing, size)

        features = sfft_forward(features, image, labels, tape.degradation_sffs[i], weights, boxes,
                                config.upsample_factor(i))

    return pointwise(state.generator.to_rgb(features), Activation.Sigmoid), tape
