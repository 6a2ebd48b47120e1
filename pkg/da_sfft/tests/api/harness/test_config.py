import os
import tempfile
import unittest

from da_sfft.api.errors import ConfigError
from da_sfft.api.harness.config import RunConfig
from da_sfft.api.networks.config import AblationMode, GeneratorConfig


class RunConfigTest(unittest.TestCase):
    def test_defaults(self):
        config = RunConfig().validate()

        self.assertEqual(64, config.resolution)
        self.assertEqual(4, config.batch_size)
        self.assertEqual(0.0001, config.generator_lr)
        self.assertEqual(0.0004, config.discriminator_lr)
        self.assertEqual(AblationMode.SfftDafe, config.ablation)
        self.assertTrue(GeneratorConfig() == config.generator_config())
        self.assertEqual((1, 3), config.m_range)

    def test_text_round_trip(self):
        config = RunConfig(master_seed=12, channels=(8, 8, 4), resolution=16, lambda_g=0.25,
                           ablation=AblationMode.SfftOnly)
        loaded = RunConfig.loads(config.dump())

        self.assertEqual(config.dump(), loaded.dump())
        self.assertEqual((8, 8, 4), loaded.channels)
        self.assertEqual(AblationMode.SfftOnly, loaded.ablation)

    def test_loads_ignores_comments(self):
        config = RunConfig.loads("# desk run\n\nmaster_seed = 5  # fixed\ngan_steps=10\n")

        self.assertEqual(5, config.master_seed)
        self.assertEqual(10, config.gan_steps)

    def test_unknown_key(self):
        with self.assertRaises(ConfigError):
            RunConfig.loads("learning_rate = 0.1\n")

    def test_unparsable_value(self):
        with self.assertRaises(ConfigError):
            RunConfig.loads("batch_size = four\n")

    def test_not_key_value(self):
        with self.assertRaises(ConfigError):
            RunConfig.loads("batch_size 4\n")

    def test_save_and_load(self):
        path = os.path.join(tempfile.mkdtemp(), "run.conf")
        RunConfig(train_size=7).save(path)

        self.assertEqual(7, RunConfig.load(path).train_size)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            RunConfig.load(os.path.join(tempfile.mkdtemp(), "missing.conf"))

    def test_overrides_skip_none(self):
        base = RunConfig(train_size=7, test_size=3)
        config = base.with_overrides({"train_size": "9", "test_size": None})

        self.assertEqual(9, config.train_size)
        self.assertEqual(3, config.test_size)
        self.assertEqual(7, base.train_size)

    def test_environment_seed(self):
        config = RunConfig(master_seed=1)

        self.assertEqual(42, config.with_environment({"DASFFT_SEED": "42"}).master_seed)
        self.assertEqual(1, config.with_environment({}).master_seed)

    def test_zero_steps_allowed(self):
        config = RunConfig(pretrain_steps=0, dafe_steps=0, gan_steps=0).validate()
        self.assertEqual(0, config.gan_steps)

    def test_zero_counts_rejected(self):
        for key in ("train_size", "batch_size", "log_interval"):
            with self.assertRaises(ConfigError):
                RunConfig(**{key: 0}).validate()

    def test_invalid_values(self):
        for values in ({"m_min": 3, "m_max": 1}, {"lambda_s": -1.0}, {"encoder_lr": 0.0},
                       {"resolution": 32}, {"master_seed": -1}):
            with self.assertRaises(ConfigError):
                RunConfig(**values).validate()

    def test_paths(self):
        config = RunConfig(work_dir="runs")

        self.assertEqual(os.path.join("runs", "model.dasfft"), config.model_file())
        self.assertEqual(os.path.join("runs", "train_log.csv"), config.log_csv_file())
        self.assertEqual("m.bin", RunConfig(model_path="m.bin").model_file())
