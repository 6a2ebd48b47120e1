import unittest

import torch

from da_sfft.api.losses.adversarial import hinge_disc_loss, hinge_gen_loss


class HingeGenLossTest(unittest.TestCase):
    def test_zero_scores(self):
        self.assertEqual(0.0, float(hinge_gen_loss([0.0, 0.0, 0.0])))

    def test_sum_of_negated_scores(self):
        self.assertAlmostEqual(-0.8, float(hinge_gen_loss([0.5, 0.2, 0.1])), places=12)
        self.assertEqual(-3.0, float(hinge_gen_loss([1.0, 1.0, 1.0])))

    def test_batch_mean_per_scale(self):
        scores = [torch.tensor([1.0, 3.0], dtype=torch.float64), torch.tensor([0.0], dtype=torch.float64)]
        self.assertEqual(-2.0, float(hinge_gen_loss(scores)))


class HingeDiscLossTest(unittest.TestCase):
    def test_inactive_hinges(self):
        self.assertEqual(0.0, float(hinge_disc_loss([1.0] * 3, [-1.0] * 3)))
        self.assertEqual(0.0, float(hinge_disc_loss([2.0] * 3, [-2.0] * 3)))

    def test_zero_scores(self):
        self.assertEqual(6.0, float(hinge_disc_loss([0.0] * 3, [0.0] * 3)))

    def test_unpaired_scales(self):
        with self.assertRaises(ValueError):
            hinge_disc_loss([0.0] * 3, [0.0] * 2)
