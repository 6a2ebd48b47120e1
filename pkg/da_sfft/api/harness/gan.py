from typing import Optional

import torch

from da_sfft.api import logger
from da_sfft.api.errors import StateError
from da_sfft.api.harness.config import RunConfig
from da_sfft.api.harness.corpus import PairedCorpus, batch_indices
from da_sfft.api.losses.adversarial import hinge_disc_loss, hinge_gen_loss
from da_sfft.api.losses.reconstruction import reconstruction_loss
from da_sfft.api.losses.report import LossReport, TrainingLogRepository, total_gen_loss
from da_sfft.api.losses.style import style_loss
from da_sfft.api.networks.forward import GeneratorMode, discriminator_forward, downscale, generator_forward
from da_sfft.api.networks.modules import DISCRIMINATOR_SCALES
from da_sfft.api.networks.state import ALIGNED_FLAG, GAN_STEPS_FLAG, PRETRAINED_FLAG, ModelState
from da_sfft.api.tensor.modules import set_frozen
from da_sfft.api.utils.clock import Clock

STAGE = "gan"


def discriminator_scores(images: torch.Tensor, state: ModelState) -> list[torch.Tensor]:
    return [discriminator_forward(downscale(images, s), s, state)[0] for s in DISCRIMINATOR_SCALES]


# Subnetworks that stay bit-identical through adversarial training
def frozen_subnetworks(state: ModelState) -> list[str]:
    return [name for name in ("hq_encoder", "hq_decoder", "lq_encoder") if name in state.present_subnetworks()]


# Mean train-mode reconstruction loss over a corpus
def corpus_reconstruction_loss(state: ModelState, corpus: PairedCorpus, batch_size: int) -> float:
    total = 0.0

    with torch.no_grad():
        for start in range(0, len(corpus), batch_size):
            batch = corpus.subset(range(start, min(start + batch_size, len(corpus))))
            restored, _ = generator_forward(batch.lq, batch.parsing, state, GeneratorMode.Train, batch.hq)
            total += float(reconstruction_loss(batch.hq, restored, state)) * len(batch)

    return total / len(corpus)


class GanTrainingService:
    logs: TrainingLogRepository
    clock: Clock

    def __init__(self, logs: TrainingLogRepository, clock: Clock):
        self.logs = logs
        self.clock = clock

    @staticmethod
    def prod():
        return GanTrainingService(TrainingLogRepository(), Clock())

    # Alternating discriminator and generator steps; returns one report per step
    def run(self, config: RunConfig, state: ModelState, corpus: PairedCorpus,
            log_csv: Optional[str] = None) -> list[LossReport]:
        state.require_initialized()

        if not state.flags[PRETRAINED_FLAG]:
            raise StateError("Adversarial training needs the pretrained HQ encoder for the style loss")

        if state.mode.uses_dafe and not state.flags[ALIGNED_FLAG]:
            raise StateError("DAFE alignment has not run on this model state")

        fingerprints = {name: state.fingerprint(name) for name in frozen_subnetworks(state)}
        for name, fingerprint in fingerprints.items():
            state.check_frozen(name, fingerprint)

        if config.gan_steps == 0:
            logger.info("No adversarial steps configured")
            return []

        weights = config.loss_weights()
        generator_optimizer = state.optimizer("generator", config.generator_lr)
        discriminator_optimizer = state.optimizer("discriminator", config.discriminator_lr)
        first_step = state.flags[GAN_STEPS_FLAG]
        start = self.clock.seconds()
        reports = []

        logger.info("Adversarial training (" + state.mode.value + ") for " + str(config.gan_steps) + " steps")

        for step in range(first_step, first_step + config.gan_steps):
            batch = corpus.subset(batch_indices(config.master_seed, STAGE, step, len(corpus), config.batch_size))

            with torch.no_grad():
                fake, _ = generator_forward(batch.lq, batch.parsing, state, GeneratorMode.Train, batch.hq)

            discriminator_loss = hinge_disc_loss(discriminator_scores(batch.hq, state),
                                                 discriminator_scores(fake, state))
            discriminator_optimizer.zero_grad()
            discriminator_loss.backward()
            discriminator_optimizer.step()

            set_frozen(state.discriminators, True)
            try:
                restored, _ = generator_forward(batch.lq, batch.parsing, state, GeneratorMode.Train, batch.hq)
                report = total_gen_loss(style_loss(batch.hq, restored, batch.parsing, state.hq_encoder),
                                        reconstruction_loss(batch.hq, restored, state),
                                        hinge_gen_loss(discriminator_scores(restored, state)),
                                        weights, step)

                generator_optimizer.zero_grad()
                report.objective.backward()
                generator_optimizer.step()
            finally:
                set_frozen(state.discriminators, False)

            report.objective = None
            report.discriminator = float(discriminator_loss)
            reports.append(report)

            if (step + 1) % config.log_interval == 0:
                logger.info("GAN step " + str(step + 1) + " L_s " + str(report.style) + " L_rec "
                            + str(report.reconstruction) + " L_G " + str(report.adversarial)
                            + " L_D " + str(report.discriminator))

        for name, fingerprint in fingerprints.items():
            state.check_frozen(name, fingerprint)

        state.flags[GAN_STEPS_FLAG] = first_step + config.gan_steps

        if log_csv:
            self.logs.write(log_csv, reports)

        logger.info("Adversarial training done in " + str(round(self.clock.elapsed(start), 1)) + "s")
        return reports
