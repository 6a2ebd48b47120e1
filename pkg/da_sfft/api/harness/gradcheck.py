from typing import Callable

import torch
from torch import nn
from torch.func import functional_call

from da_sfft.api import logger
from da_sfft.api.errors import GradientCheckError
from da_sfft.api.facegen.components import Component, component_boxes
from da_sfft.api.losses.adversarial import hinge_disc_loss, hinge_gen_loss
from da_sfft.api.losses.alignment import dafe_alignment_loss
from da_sfft.api.losses.reconstruction import reconstruction_loss
from da_sfft.api.losses.style import masked_gram, style_loss
from da_sfft.api.networks.config import AblationMode, GeneratorConfig
from da_sfft.api.networks.forward import fc_head
from da_sfft.api.networks.state import ModelState
from da_sfft.api.sfft.components import ComponentCrop
from da_sfft.api.sfft.layers import facial_attention, fuse_sff, sff_extract, sfft_enhance, sfft_forward, sft_apply
from da_sfft.api.sfft.sff import SFF
from da_sfft.api.sfft.weights import AttentionStack, SFFStack, SFFTWeights
from da_sfft.api.tensor.gradcheck import GradientCheck, check_gradient
from da_sfft.api.tensor.modules import ConvLayer, initialize
from da_sfft.api.tensor.ops import (Activation, Resample, channel_stats, conv2d, pointwise, resize, resize_labels,
                                    upsample)
from da_sfft.api.utils.seeding import SeedStream

CHANNELS = 4
SIZE = 8

# Suite model: 16px output, three 4-channel scales
SUITE_CONFIG = GeneratorConfig(16, (CHANNELS, CHANNELS, CHANNELS), hidden_width=4, embedding_width=8)


class GradientCase:
    name: str
    function: Callable[[torch.Tensor], torch.Tensor]
    point: torch.Tensor

    def __init__(self, name: str, function: Callable[[torch.Tensor], torch.Tensor], point: torch.Tensor):
        self.name = name
        self.function = function
        self.point = point


# Evaluates objective with the owner's parameters replaced through functional_call
class _Bound(nn.Module):
    def __init__(self, owner: nn.Module, objective: Callable[[], torch.Tensor]):
        super().__init__()

        self.owner = owner
        self.objective = objective

    def forward(self) -> torch.Tensor:
        return self.objective()


# Finite-difference verification of every differentiable operation and loss on tiny instances
class GradientSuite:
    stream: SeedStream

    def __init__(self, seed: int = 0):
        self.stream = SeedStream(seed).child("gradcheck")

    def _normal(self, name: str, *shape) -> torch.Tensor:
        return self.stream.normal(shape, name)

    def _module(self, name: str, module: nn.Module) -> nn.Module:
        initialize(module, self.stream, name + ".")
        return module

    # Case over one learnable parameter of owner, checked at its initialized value
    @staticmethod
    def _parameter_case(name: str, owner: nn.Module, parameter: str,
                        objective: Callable[[], torch.Tensor]) -> GradientCase:
        bound = _Bound(owner, objective)

        return GradientCase(name, lambda t: functional_call(bound, {"owner." + parameter: t}, ()),
                            owner.get_parameter(parameter).detach().clone())

    def _tensor_cases(self) -> list[GradientCase]:
        x = self._normal("conv.input", 1, 4, SIZE, SIZE)
        kernel = self._normal("conv.kernel", 2, 4, 3, 3)
        bias = self._normal("conv.bias", 2)
        weights = self._normal("weights", 2, SIZE, SIZE)

        return [
            GradientCase("conv2d.input", lambda t: (conv2d(t, kernel, bias) * weights).sum(), x),
            GradientCase("conv2d.kernel", lambda t: (conv2d(x, t, bias) * weights).sum(), kernel),
            GradientCase("conv2d.bias", lambda t: (conv2d(x, kernel, t) * weights).sum(), bias),
            GradientCase("sigmoid", lambda t: (pointwise(t, Activation.Sigmoid) * x).sum(),
                         self._normal("sigmoid", 1, 4, SIZE, SIZE)),
            GradientCase("relu", lambda t: (pointwise(t, Activation.Relu) * x).sum(),
                         self._normal("relu", 1, 4, SIZE, SIZE)),
            GradientCase("upsample.bilinear", lambda t: (upsample(t, 2, Resample.Bilinear) * x).sum(),
                         self._normal("upsample", 1, 4, SIZE // 2, SIZE // 2)),
            GradientCase("channel_stats", self._stats_objective(), x),
        ]

    @staticmethod
    def _stats_objective() -> Callable[[torch.Tensor], torch.Tensor]:
        def objective(t):
            mu, sigma = channel_stats(t)
            return (mu * torch.arange(1, mu.shape[-1] + 1, dtype=torch.float64)).sum() + (sigma ** 2 + sigma).sum()

        return objective

    def _sfft_cases(self) -> list[GradientCase]:
        features = self._normal("sft.features", 1, CHANNELS, SIZE, SIZE)
        sff = SFF(self._normal("sft.scale", 1, CHANNELS), self._normal("sft.bias", 1, CHANNELS))
        weights = self._normal("sft.weights", 1, CHANNELS, SIZE, SIZE)

        crop = ComponentCrop(Component.LeftEye, self.stream.uniform((1, 3, 5, 6), "crop.image"),
                             (self.stream.uniform((1, 1, 5, 6), "crop.mask") > 0.5).to(torch.float64))
        stack = self._module("sff", SFFStack(4, CHANNELS, 4))

        def extract(kernel):
            sff = sff_extract(crop, lambda x: functional_call(stack, {"blocks.0.weight": kernel}, (x,)))
            return sff.scale.sum() + sff.bias.sum()

        attention = self._module("attention", AttentionStack(2, CHANNELS, 4))
        branches = [self._normal("attention.branch", 1, CHANNELS, SIZE, SIZE),
                    self._normal("attention.other", 1, CHANNELS, SIZE, SIZE)]
        fusion = self._module("fusion", SFFStack(CHANNELS, CHANNELS, 4))
        maps = torch.cat([self.stream.uniform((1, 1, SIZE, SIZE), "fusion.map", str(j)) for j in range(2)], 1)
        refine = self._module("refine", ConvLayer(CHANNELS, CHANNELS))
        previous = self._normal("enhance.previous", 1, CHANNELS, SIZE // 2, SIZE // 2)
        w = SFF(self._normal("enhance.ws", 1, CHANNELS), self._normal("enhance.wb", 1, CHANNELS))

        def attend(t):
            maps = facial_attention([t, branches[1]], attention)
            return maps[0].sum() + 2 * maps[1].sum()

        def fuse(t):
            fused = fuse_sff(branches, list(t.split(1, dim=1)), fusion)
            return fused.scale.sum() + 2 * fused.bias.sum()

        def extracted():
            result = sff_extract(crop, stack)
            return result.scale.sum() + 2 * result.bias.sum()

        def fused():
            return fuse(maps)

        def enhanced(y=sff, degradation=w):
            return (sfft_enhance(previous, y, degradation, 2, refine) * weights).sum()

        return [
            self._parameter_case("sff_extract.blocks.1.weight", stack, "blocks.1.weight", extracted),
            self._parameter_case("sff_extract.head.weight", stack, "head.weight", extracted),
            GradientCase("sft_apply.bias", lambda t: (sft_apply(features, SFF(sff.scale, t)) * weights).sum(),
                         sff.bias),
            self._parameter_case("facial_attention.blocks.0.weight", attention, "blocks.0.weight",
                                 lambda: attend(branches[0])),
            self._parameter_case("facial_attention.head.weight", attention, "head.weight",
                                 lambda: attend(branches[0])),
            self._parameter_case("facial_attention.head.bias", attention, "head.bias", lambda: attend(branches[0])),
            self._parameter_case("fuse_sff.blocks.2.weight", fusion, "blocks.2.weight", fused),
            self._parameter_case("fuse_sff.head.weight", fusion, "head.weight", fused),
            GradientCase("sfft_enhance.y_scale", lambda t: enhanced(y=SFF(t, sff.bias)), sff.scale),
            GradientCase("sfft_enhance.y_bias", lambda t: enhanced(y=SFF(sff.scale, t)), sff.bias),
            GradientCase("sfft_enhance.w_scale", lambda t: enhanced(degradation=SFF(t, w.bias)), w.scale),
            GradientCase("sfft_enhance.w_bias", lambda t: enhanced(degradation=SFF(w.scale, t)), w.bias),
            self._parameter_case("sfft_enhance.refine.weight", refine, "weight", enhanced),
            GradientCase("sff_extract.kernel", extract, stack.blocks[0].weight.detach().clone()),
            GradientCase("sft_apply.features", lambda t: (sft_apply(t, sff) * weights).sum(), features),
            GradientCase("sft_apply.scale", lambda t: (sft_apply(features, SFF(t, sff.bias)) * weights).sum(),
                         sff.scale),
            GradientCase("facial_attention.features", attend, branches[0]),
            GradientCase("fuse_sff.maps", fuse, maps),
            GradientCase("sfft_enhance.previous", lambda t: (sfft_enhance(t, sff, w, 2, refine) * weights).sum(),
                         previous),
            self._block_case(),
        ]

    # Two composed SFFT scale levels, C=4, 4x4 then 8x8
    def _block_case(self) -> GradientCase:
        boxes = component_boxes()
        levels = [self._module("block." + str(i), SFFTWeights(CHANNELS, CHANNELS, len(boxes), 4)) for i in range(2)]
        image = self.stream.uniform((1, 3, SIZE, SIZE), "block.image")
        parsing = torch.zeros(1, SIZE, SIZE, dtype=torch.int64)
        parsing[:, 2:4, 2:4] = int(Component.LeftEye)
        parsing[:, 2:4, 5:7] = int(Component.RightEye)
        parsing[:, 4:6, 3:5] = int(Component.Nose)
        parsing[:, 6:7, 3:6] = int(Component.Mouth)
        weights = self._normal("block.weights", 1, CHANNELS, SIZE, SIZE)

        def block(start):
            features = start
            for i, level in enumerate(levels):
                size = 4 * 2 ** i
                features = sfft_forward(features, resize(image, (size, size), Resample.Bilinear, antialias=True),
                                        resize_labels(parsing, (size, size)), SFF.zeros(CHANNELS, (1,)), level,
                                        boxes, 1 if i == 0 else 2)
            return (features * weights).sum()

        return GradientCase("sfft_block.start", block, self._normal("block.start", 1, CHANNELS, 4, 4))

    def _network_cases(self) -> list[GradientCase]:
        state = ModelState.create(SUITE_CONFIG, AblationMode.SfftDafe, self.stream.seed("state"))
        hq = self.stream.uniform((1, 3, SIZE, SIZE), "network.hq")
        restored = self.stream.uniform((1, 3, SIZE, SIZE), "network.restored")
        parsing = (self.stream.uniform((1, SIZE, SIZE), "network.parsing") * 5).floor().to(torch.int64)
        v = self._normal("network.v", 1, SUITE_CONFIG.embedding_width)

        def head(t):
            sff = fc_head(t, state, 1)
            return sff.scale.sum() + 3 * sff.bias.sum()

        heads = state.subnetwork("fc_heads")
        discriminator = state.discriminators[0]

        def judged():
            score, feats = discriminator(hq)
            return score.sum() + feats[1].mean()

        return [
            GradientCase("fc_head.embedding", head, v),
            self._parameter_case("fc_head.first.weight", heads, "1.first.weight", lambda: head(v)),
            self._parameter_case("fc_head.second.weight", heads, "1.second.weight", lambda: head(v)),
            self._parameter_case("fc_head.second.bias", heads, "1.second.bias", lambda: head(v)),
            self._parameter_case("discriminator.blocks.0.weight", discriminator, "blocks.0.weight", judged),
            self._parameter_case("discriminator.head.weight", discriminator, "head.weight", judged),
            GradientCase("discriminator.input", lambda t: state.discriminators[0](t)[0].sum(), hq),
            GradientCase("reconstruction_loss.restored", lambda t: reconstruction_loss(hq, t, state), restored),
            GradientCase("style_loss.restored", lambda t: style_loss(hq, t, parsing, state.hq_encoder), restored),
            GradientCase("masked_gram.features",
                         lambda t: (masked_gram(t, (parsing[:, None] == 0).to(torch.float64)) ** 2).sum(),
                         self._normal("gram.features", 1, CHANNELS, SIZE, SIZE)),
        ]

    def _loss_cases(self) -> list[GradientCase]:
        scores = self._normal("scores", 3, 4)
        fake = self._normal("scores.fake", 3, 4)
        target = self._normal("alignment.target", 8)

        return [
            GradientCase("hinge_gen_loss.scores", lambda t: hinge_gen_loss(list(t)), scores),
            GradientCase("hinge_disc_loss.real", lambda t: hinge_disc_loss(list(t), list(fake)), scores),
            GradientCase("dafe_alignment_loss.lq", lambda t: dafe_alignment_loss(target, t),
                         self._normal("alignment.lq", 8)),
        ]

    def cases(self) -> list[GradientCase]:
        return self._tensor_cases() + self._sfft_cases() + self._network_cases() + self._loss_cases()

    def run(self) -> list[GradientCheck]:
        checks = []

        for case in self.cases():
            check = check_gradient(case.name, case.function, case.point)
            logger.info(check.render())
            checks.append(check)

        return checks

    def verify(self) -> list[GradientCheck]:
        checks = self.run()
        failed = [c for c in checks if not c.passed]

        if failed:
            raise GradientCheckError("Gradient checks failed: " + ", ".join(c.render() for c in failed))

        return checks
