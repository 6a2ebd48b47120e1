import unittest
from unittest.mock import patch

import torch

from da_sfft.api.errors import GradientCheckError
from da_sfft.api.harness.gradcheck import GradientSuite
from da_sfft.api.tensor.gradcheck import GradientCheck


class GradientSuiteTest(unittest.TestCase):
    def test_case_names(self):
        names = [case.name for case in GradientSuite(0).cases()]

        self.assertEqual(len(names), len(set(names)))
        for name in ("conv2d.kernel", "channel_stats", "sff_extract.kernel", "sft_apply.features",
                     "facial_attention.features", "fuse_sff.maps", "sfft_enhance.previous", "sfft_block.start",
                     "fc_head.embedding", "discriminator.input", "reconstruction_loss.restored",
                     "style_loss.restored", "masked_gram.features", "hinge_gen_loss.scores",
                     "hinge_disc_loss.real", "dafe_alignment_loss.lq"):
            self.assertIn(name, names)

    def test_learnable_parameter_cases(self):
        names = [case.name for case in GradientSuite(0).cases()]

        for name in ("sff_extract.blocks.1.weight", "sff_extract.head.weight", "sft_apply.scale", "sft_apply.bias",
                     "facial_attention.blocks.0.weight", "facial_attention.head.weight",
                     "facial_attention.head.bias", "fuse_sff.blocks.2.weight", "fuse_sff.head.weight",
                     "sfft_enhance.y_scale", "sfft_enhance.y_bias", "sfft_enhance.w_scale", "sfft_enhance.w_bias",
                     "sfft_enhance.refine.weight", "fc_head.first.weight",
                     "fc_head.second.weight", "fc_head.second.bias", "discriminator.blocks.0.weight",
                     "discriminator.head.weight"):
            self.assertIn(name, names)

    def test_parameter_case_substitutes_value(self):
        suite = GradientSuite(0)
        case = next(c for c in suite.cases() if c.name == "facial_attention.head.weight")

        first = case.function(case.point)
        second = case.function(case.point + 1.0)

        self.assertNotEqual(first.item(), second.item())
        self.assertTrue(torch.equal(first, case.function(case.point)))

    def test_small_instances(self):
        for case in GradientSuite(0).cases():
            self.assertLessEqual(case.point.numel(), 8 * 8 * 8, case.name)

    def test_suite_passes(self):
        checks = GradientSuite(0).verify()

        self.assertTrue(all(check.passed for check in checks))
        self.assertTrue(all(check.relative_error < 1e-4 for check in checks))

    def test_failure_is_raised(self):
        failing = GradientCheck("broken", 0.5, 1e-4)

        with patch.object(GradientSuite, "run", return_value=[failing]):
            with self.assertRaises(GradientCheckError):
                GradientSuite(0).verify()
