import tempfile

import torch

from da_sfft.api.harness.config import RunConfig
from da_sfft.api.harness.corpus import CorpusService, PairedCorpus
from da_sfft.api.networks.config import AblationMode, GeneratorConfig
from da_sfft.api.networks.state import ModelState
from da_sfft.api.utils.seeding import SeedStream


class Fixtures:
    # 32px output over four scale levels
    config = GeneratorConfig(32, (8, 8, 4, 4), hidden_width=4, embedding_width=8)

    @staticmethod
    def state(mode: AblationMode = AblationMode.SfftDafe, seed: int = 3) -> ModelState:
        return ModelState.create(Fixtures.config, mode, seed)

    @staticmethod
    def run_config(**values) -> RunConfig:
        defaults = {
            "master_seed": 11,
            "resolution": 32,
            "channels": (8, 8, 4, 4),
            "hidden_width": 4,
            "embedding_width": 8,
            "train_size": 4,
            "test_size": 2,
            "pretrain_steps": 2,
            "dafe_steps": 2,
            "gan_steps": 2,
            "batch_size": 2,
            "m_min": 1,
            "m_max": 1,
            "log_interval": 1,
            "work_dir": tempfile.mkdtemp(prefix="da_sfft_"),
        }
        defaults.update(values)

        return RunConfig(**defaults).validate()

    @staticmethod
    def corpus(count: int = 4, split: str = "train", seed: int = 5) -> PairedCorpus:
        return CorpusService.prod().synthesize(seed, split, count, 32, (1, 1))

    @staticmethod
    def random(shape, *names, seed: int = 1) -> torch.Tensor:
        return SeedStream(seed).normal(shape, *names)

    @staticmethod
    def uniform(shape, *names, seed: int = 1) -> torch.Tensor:
        return SeedStream(seed).uniform(shape, *names)
