import unittest

import torch

from da_sfft.api.degradation.model import TransmissionMap, degrade, make_rain_layer, rain_noise, transmission_map
from da_sfft.api.degradation.params import DegradationParams, RainLayerParams, sample_params
from da_sfft.api.errors import ShapeError
from da_sfft.api.facegen.generator import generate_face
from da_sfft.tests.fixtures import Fixtures


class RainLayerTest(unittest.TestCase):
    layer = RainLayerParams(-1.0, 0.7, 45, 80.0, 1234)

    def test_deterministic(self):
        self.assertTrue(torch.equal(make_rain_layer((32, 32), self.layer), make_rain_layer((32, 32), self.layer)))

    def test_values_in_unit_interval(self):
        rain = make_rain_layer((32, 32), self.layer)

        self.assertEqual((1, 32, 32), tuple(rain.shape))
        self.assertTrue(bool((rain >= 0).all()))
        self.assertTrue(bool((rain <= 1 + 1e-12).all()))

    def test_nonzero_fraction_before_filtering(self):
        noise = rain_noise((128, 128), self.layer)
        self.assertAlmostEqual(0.0766, float((noise > 0).to(torch.float64).mean()), delta=0.01)


class TransmissionMapTest(unittest.TestCase):
    def test_tiny_beta(self):
        t = transmission_map(Fixtures.uniform((1, 8, 8), "depth"), 1e-9).t
        self.assertTrue(torch.allclose(t, torch.ones_like(t), atol=1e-8, rtol=0))

    def test_constant_depth(self):
        t = transmission_map(torch.full((1, 8, 8), 0.4, dtype=torch.float64), 4.0).t
        self.assertTrue(torch.allclose(t, torch.ones_like(t), atol=1e-6, rtol=0))

    def test_two_valued_depth(self):
        depth = torch.full((1, 4, 4), 0.9, dtype=torch.float64)
        depth[:, :2] = 0.15
        t = transmission_map(depth, 4.6).t

        self.assertAlmostEqual(0.01005, float(t[0, 0, 0]), delta=1e-4)
        self.assertAlmostEqual(1.0, float(t[0, 3, 3]), delta=1e-12)

    def test_larger_beta_gives_smaller_t(self):
        depth = Fixtures.uniform((1, 8, 8), "depth")
        self.assertTrue(bool((transmission_map(depth, 4.0).t <= transmission_map(depth, 3.0).t).all()))

    def test_invalid_inputs(self):
        with self.assertRaises(ValueError):
            transmission_map(torch.ones(1, 2, 2), 0.0)

        with self.assertRaises(ValueError):
            transmission_map(-torch.ones(1, 2, 2), 1.0)


class DegradeTest(unittest.TestCase):
    face = generate_face(17, 32)

    def test_identity_parameters(self):
        params = DegradationParams(0.0, 32, [], 1e-9, (0.5, 0.5, 0.5), 0)
        out = degrade(self.face.image, self.face.depth, params)

        self.assertTrue(torch.allclose(out, self.face.image, atol=1e-6, rtol=0))

    def test_injected_transmission(self):
        params = DegradationParams(0.0, 32, [], 3.0, (0.2, 0.4, 0.6), 0)
        t = torch.full((1, 32, 32), 0.3, dtype=torch.float64)
        out = degrade(self.face.image, self.face.depth, params, TransmissionMap(t))

        atmospheric = torch.tensor([0.2, 0.4, 0.6], dtype=torch.float64).view(3, 1, 1)
        self.assertTrue(torch.allclose(out, 0.3 * self.face.image + 0.7 * atmospheric, atol=1e-12))

    def test_deterministic_and_bounded(self):
        params = sample_params(99, (1, 3))
        first = degrade(self.face.image, self.face.depth, params)

        self.assertTrue(torch.equal(first, degrade(self.face.image, self.face.depth, params)))
        self.assertTrue(bool((first >= 0).all()) and bool((first <= 1).all()))

    def test_mismatched_depth(self):
        with self.assertRaises(ShapeError):
            degrade(self.face.image, torch.ones(1, 16, 16, dtype=torch.float64), sample_params(1))
