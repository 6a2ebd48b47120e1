import argparse
import os

import torch

from da_sfft.api import attach_log_file, logger
from da_sfft.api.harness.ablation import AblationService
from da_sfft.api.harness.config import RunConfig
from da_sfft.api.harness.corpus import CorpusService, PairedCorpus
from da_sfft.api.harness.dafe import DafeTrainingService
from da_sfft.api.harness.evaluate import EvaluationService
from da_sfft.api.harness.gan import GanTrainingService
from da_sfft.api.harness.gradcheck import GradientSuite
from da_sfft.api.harness.pretrain import EncoderPretrainingService
from da_sfft.api.harness.restore import RestorationService
from da_sfft.api.networks.repository import ModelStateRepository
from da_sfft.api.networks.state import ModelState


# File values, then command line flags, then DASFFT_SEED
def run_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.load(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {key: getattr(args, key, None) for key in RunConfig.fields()}
    config = config.with_overrides(overrides).with_environment().validate()

    torch.set_num_threads(config.threads)
    os.makedirs(config.work_dir, exist_ok=True)

    if config.log_file:
        attach_log_file(os.path.abspath(config.log_file))

    return config


def _train_corpus(config: RunConfig, args: argparse.Namespace) -> PairedCorpus:
    if getattr(args, "manifest", None):
        return CorpusService.prod().load(args.manifest)

    return CorpusService.prod().synthesize(config.master_seed, "train", config.train_size, config.resolution,
                                           config.m_range)


def _test_corpus(config: RunConfig) -> PairedCorpus:
    return CorpusService.prod().synthesize(config.master_seed, "test", config.test_size, config.resolution,
                                           config.m_range)


def pretrain_encoder(args: argparse.Namespace) -> int:
    config = run_config(args)
    state = ModelState.create(config.generator_config(), config.ablation, config.master_seed)

    EncoderPretrainingService.prod().run(config, state, _train_corpus(config, args))
    ModelStateRepository().save(config.model_file(), state)
    return 0


def align_dafe(args: argparse.Namespace) -> int:
    config = run_config(args)
    models = ModelStateRepository()
    state = models.load(config.model_file())

    report = DafeTrainingService.prod().run(config, state, _train_corpus(config, args), _test_corpus(config))
    models.save(config.model_file(), state)

    with open(os.path.join(config.work_dir, "alignment.txt"), "w") as stream:
        stream.write(report.to_text())

    return 0


def train(args: argparse.Namespace) -> int:
    config = run_config(args)
    models = ModelStateRepository()
    state = models.load(config.model_file())

    GanTrainingService.prod().run(config, state, _train_corpus(config, args), config.log_csv_file())
    models.save(config.model_file(), state)
    return 0


def restore(args: argparse.Namespace) -> int:
    service = RestorationService.prod()

    if args.manifest:
        service.restore_manifest(args.model, args.manifest, args.out)
    else:
        if not (args.input and args.parsing):
            raise ValueError("restore needs --in and --parsing, or --manifest")
        service.restore_file(args.model, args.input, args.parsing, args.out)

    return 0


def evaluate(args: argparse.Namespace) -> int:
    config = run_config(args)
    EvaluationService.prod().evaluate_manifest(args.model, args.manifest, args.csv, config.master_seed)
    return 0


def ablation(args: argparse.Namespace) -> int:
    config = run_config(args)
    report = AblationService.prod().run(config, _train_corpus(config, args), _test_corpus(config))

    path = args.report or os.path.join(config.work_dir, "ablation.txt")
    with open(path, "w") as stream:
        stream.write(report.to_text())

    logger.info("Ablation report written to " + path)
    return 0


def gradcheck(args: argparse.Namespace) -> int:
    checks = GradientSuite(args.seed).verify()
    logger.info(str(len(checks)) + " gradient checks passed")
    return 0
