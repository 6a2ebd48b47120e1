import unittest
from unittest.mock import MagicMock

import torch

from da_sfft.api.errors import ShapeError
from da_sfft.api.facegen.components import Component, component_boxes
from da_sfft.api.sfft.components import ComponentCrop
from da_sfft.api.sfft.layers import facial_attention, fuse_sff, phi, sff_extract, sfft_enhance, sfft_forward, sft_apply
from da_sfft.api.sfft.sff import SFF
from da_sfft.api.sfft.weights import AttentionStack, SFFStack, SFFTWeights
from da_sfft.api.tensor.modules import ConvLayer, initialize
from da_sfft.api.tensor.ops import channel_stats
from da_sfft.api.utils.seeding import SeedStream
from da_sfft.tests.fixtures import Fixtures

CHANNELS = 4


def _pooled(u: torch.Tensor) -> torch.Tensor:
    pooled = u.mean(dim=(-2, -1))
    return torch.cat([pooled, pooled], dim=-1)


class SffExtractTest(unittest.TestCase):
    def test_zero_network(self):
        crop = ComponentCrop(Component.Nose, Fixtures.uniform((3, 5, 7), "crop"),
                             torch.ones(1, 5, 7, dtype=torch.float64))
        sff = sff_extract(crop, SFFStack(4, CHANNELS, 4))

        self.assertEqual([0.0] * CHANNELS, sff.scale.tolist())
        self.assertEqual([0.0] * CHANNELS, sff.bias.tolist())

    def test_width_independent_of_crop_size(self):
        stack = SFFStack(4, CHANNELS, 4)
        initialize(stack, SeedStream(1))

        for height, width in ((1, 1), (5, 7), (16, 9)):
            crop = ComponentCrop(Component.Mouth, Fixtures.uniform((3, height, width), "crop"),
                                 torch.ones(1, height, width, dtype=torch.float64))
            sff = sff_extract(crop, stack)

            self.assertEqual((CHANNELS,), tuple(sff.scale.shape))
            self.assertEqual((CHANNELS,), tuple(sff.bias.shape))


class SftApplyTest(unittest.TestCase):
    def test_statistic_matching(self):
        for i in range(50):
            features = Fixtures.random((CHANNELS, 8, 8), "features", i)
            sff = SFF(Fixtures.random((CHANNELS,), "scale", i), Fixtures.random((CHANNELS,), "bias", i))

            mu, sigma = channel_stats(sft_apply(features, sff))

            self.assertTrue(torch.allclose(mu, sff.bias, atol=1e-10, rtol=0))
            self.assertTrue(torch.allclose(sigma, sff.scale.abs(), atol=1e-4, rtol=0))

    def test_own_statistics_are_identity(self):
        features = Fixtures.random((CHANNELS, 8, 8), "features")
        mu, sigma = channel_stats(features)

        out = sft_apply(features, SFF(sigma, mu))
        self.assertLess(float((out - features).norm() / features.norm()), 1e-3)

    def test_constant_channel(self):
        features = torch.full((1, 4, 4), 3.0, dtype=torch.float64)
        out = sft_apply(features, SFF(torch.tensor([2.0], dtype=torch.float64),
                                      torch.tensor([5.0], dtype=torch.float64)))

        self.assertTrue(torch.equal(torch.full((1, 4, 4), 5.0, dtype=torch.float64), out))

    def test_batched(self):
        features = Fixtures.random((2, CHANNELS, 4, 4), "features")
        sff = SFF(Fixtures.random((2, CHANNELS), "scale"), Fixtures.random((2, CHANNELS), "bias"))

        mu, _ = channel_stats(sft_apply(features, sff))
        self.assertTrue(torch.allclose(mu, sff.bias, atol=1e-10, rtol=0))

    def test_width_mismatch(self):
        with self.assertRaises(ShapeError):
            sft_apply(Fixtures.random((3, 4, 4), "features"), SFF.zeros(CHANNELS))


class FacialAttentionTest(unittest.TestCase):
    features = [Fixtures.random((1, CHANNELS, 8, 8), "branch", j) for j in range(3)]

    def test_zero_head_gives_half(self):
        stack = AttentionStack(3, CHANNELS, 4)
        initialize(stack.blocks, SeedStream(2))

        for attention in facial_attention(self.features, stack):
            self.assertEqual((1, 1, 8, 8), tuple(attention.shape))
            self.assertTrue(torch.equal(torch.full_like(attention, 0.5), attention))

    def test_open_interval(self):
        stack = AttentionStack(3, CHANNELS, 4)
        initialize(stack, SeedStream(2))

        for attention in facial_attention([f * 100 for f in self.features], stack):
            self.assertTrue(bool((attention > 0).all()) and bool((attention < 1).all()))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            facial_attention([self.features[0], self.features[1][..., :4]], AttentionStack(2, CHANNELS, 4))


class FuseSffTest(unittest.TestCase):
    features = [Fixtures.random((1, CHANNELS, 8, 8), "branch", j) for j in range(2)]
    maps = [Fixtures.uniform((1, 1, 8, 8), "map", j) for j in range(2)]

    def test_single_unit_map_is_identity(self):
        stack = MagicMock(side_effect=_pooled)
        fuse_sff(self.features[:1], [torch.ones(1, 1, 8, 8, dtype=torch.float64)], stack)

        self.assertTrue(torch.equal(self.features[0], stack.call_args.args[0]))

    def test_zero_maps(self):
        stack = MagicMock(side_effect=_pooled)
        sff = fuse_sff(self.features, [torch.zeros(1, 1, 8, 8, dtype=torch.float64)] * 2, stack)

        self.assertEqual(0.0, float(stack.call_args.args[0].abs().sum()))
        self.assertEqual(0.0, float(sff.scale.abs().sum()))

    def test_weighted_sum_is_linear(self):
        stack = MagicMock(side_effect=_pooled)

        fuse_sff(self.features, self.maps, stack)
        base = stack.call_args.args[0]
        fuse_sff(self.features, [2 * self.maps[0], self.maps[1]], stack)
        doubled = stack.call_args.args[0]

        self.assertTrue(torch.allclose(doubled - base, self.features[0] * self.maps[0], atol=1e-12))

    def test_one_map_per_component(self):
        with self.assertRaises(ShapeError):
            fuse_sff(self.features, self.maps[:1], MagicMock(side_effect=_pooled))


class SfftEnhanceTest(unittest.TestCase):
    previous = Fixtures.random((1, CHANNELS, 4, 4), "previous")
    y = SFF(Fixtures.random((1, CHANNELS), "ys"), Fixtures.random((1, CHANNELS), "yb"))
    w = SFF(Fixtures.random((1, CHANNELS), "ws"), Fixtures.random((1, CHANNELS), "wb"))

    def setUp(self):
        super().setUp()

        self.conv = ConvLayer(CHANNELS, CHANNELS)
        initialize(self.conv, SeedStream(4))

    def test_zero_degradation_sff(self):
        out = sfft_enhance(self.previous, self.y, SFF.zeros(CHANNELS, (1,)), 2, self.conv)
        expected = sft_apply(phi(self.previous, 2, self.conv), self.y)

        self.assertEqual((1, CHANNELS, 8, 8), tuple(out.shape))
        self.assertTrue(torch.allclose(expected, out, atol=1e-12, rtol=0))

    def test_statistics_are_summed(self):
        mu, sigma = channel_stats(sfft_enhance(self.previous, self.y, self.w, 2, self.conv))

        self.assertTrue(torch.allclose(mu, self.y.bias + self.w.bias, atol=1e-10, rtol=0))
        self.assertTrue(torch.allclose(sigma, (self.y.scale + self.w.scale).abs(), atol=1e-4, rtol=0))

    def test_cancelled_statistics(self):
        negated = SFF(-self.w.scale, -self.w.bias)
        out = sfft_enhance(self.previous, negated, self.w, 2, self.conv)

        self.assertTrue(torch.equal(torch.zeros_like(out), out))

    def test_width_mismatch(self):
        with self.assertRaises(ShapeError):
            sfft_enhance(self.previous, self.y, SFF.zeros(CHANNELS + 1, (1,)), 2, self.conv)


class SfftForwardTest(unittest.TestCase):
    boxes = component_boxes()
    image = Fixtures.uniform((1, 3, 8, 8), "image")
    parsing = (Fixtures.uniform((1, 8, 8), "parsing") * 5).floor().to(torch.int64)
    previous = Fixtures.random((1, CHANNELS, 4, 4), "previous")

    def setUp(self):
        super().setUp()

        self.weights = SFFTWeights(CHANNELS, CHANNELS, len(self.boxes), 4)
        initialize(self.weights, SeedStream(8))

    def test_shape_and_determinism(self):
        out = sfft_forward(self.previous, self.image, self.parsing, SFF.zeros(CHANNELS, (1,)), self.weights,
                           self.boxes, 2)

        self.assertEqual((1, CHANNELS, 8, 8), tuple(out.shape))
        self.assertTrue(torch.equal(out, sfft_forward(self.previous, self.image, self.parsing,
                                                      SFF.zeros(CHANNELS, (1,)), self.weights, self.boxes, 2)))

    def test_degradation_sff_shifts_mean(self):
        shift = SFF(torch.zeros(1, CHANNELS, dtype=torch.float64), torch.ones(1, CHANNELS, dtype=torch.float64))

        plain = sfft_forward(self.previous, self.image, self.parsing, SFF.zeros(CHANNELS, (1,)), self.weights,
                             self.boxes, 2)
        shifted = sfft_forward(self.previous, self.image, self.parsing, shift, self.weights, self.boxes, 2)

        self.assertTrue(torch.allclose(channel_stats(shifted)[0], channel_stats(plain)[0] + 1, atol=1e-10))

    def test_box_count_mismatch(self):
        with self.assertRaises(ShapeError):
            sfft_forward(self.previous, self.image, self.parsing, SFF.zeros(CHANNELS, (1,)), self.weights,
                         self.boxes[:3], 2)

    def test_scale_resolution_mismatch(self):
        with self.assertRaises(ShapeError):
            sfft_forward(self.previous, self.image, self.parsing, SFF.zeros(CHANNELS, (1,)), self.weights,
                         self.boxes, 1)
