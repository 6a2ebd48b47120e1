import unittest

import torch

from da_sfft.api.errors import ShapeError
from da_sfft.api.metrics.quality import PSNR_CAP, SSIM_K1, psnr, ssim
from da_sfft.tests.fixtures import Fixtures


class PsnrTest(unittest.TestCase):
    def test_identical_images_capped(self):
        image = Fixtures.uniform((3, 16, 16), "image")
        self.assertEqual(PSNR_CAP, psnr(image, image.clone()))

    def test_twenty_db(self):
        a = torch.zeros(3, 16, 16, dtype=torch.float64)
        self.assertAlmostEqual(20.0, psnr(a, torch.full_like(a, 0.1)), places=9)

    def test_zero_db(self):
        a = torch.zeros(3, 16, 16, dtype=torch.float64)
        self.assertAlmostEqual(0.0, psnr(a, torch.ones_like(a)), places=12)

    def test_symmetric(self):
        a = Fixtures.uniform((3, 16, 16), "a")
        b = Fixtures.uniform((3, 16, 16), "b")

        self.assertEqual(psnr(a, b), psnr(b, a))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            psnr(torch.zeros(3, 16, 16), torch.zeros(3, 8, 8))


class SsimTest(unittest.TestCase):
    def test_identical_images(self):
        image = Fixtures.uniform((3, 16, 16), "image")
        self.assertEqual(1.0, ssim(image, image.clone()))

    def test_constant_images(self):
        a = torch.zeros(3, 16, 16, dtype=torch.float64)
        c1 = SSIM_K1 ** 2

        self.assertAlmostEqual(c1 / (1 + c1), ssim(a, torch.ones_like(a)), delta=1e-9)

    def test_symmetric_and_bounded(self):
        a = Fixtures.uniform((2, 3, 16, 16), "a")
        b = Fixtures.uniform((2, 3, 16, 16), "b")

        self.assertAlmostEqual(ssim(a, b), ssim(b, a), places=12)
        self.assertTrue(-1.0 <= ssim(a, b) <= 1.0)

    def test_too_small(self):
        with self.assertRaises(ShapeError):
            ssim(torch.zeros(3, 10, 10), torch.zeros(3, 10, 10))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            ssim(torch.zeros(3, 16, 16), torch.zeros(3, 12, 12))
