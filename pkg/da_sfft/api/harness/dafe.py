import torch

from da_sfft.api import logger
from da_sfft.api.errors import StateError
from da_sfft.api.harness.config import RunConfig
from da_sfft.api.harness.corpus import PairedCorpus, batch_indices
from da_sfft.api.losses.alignment import dafe_alignment_loss
from da_sfft.api.networks.forward import EncoderKind, encoder_forward
from da_sfft.api.networks.modules import Encoder
from da_sfft.api.networks.state import ALIGNED_FLAG, PRETRAINED_FLAG, ModelState
from da_sfft.api.utils.clock import Clock

STAGE = "dafe"


class AlignmentReport:
    steps: int

    # Mean held-out embedding MSE before and after alignment
    initial_mse: float
    final_mse: float

    def __init__(self, steps: int, initial_mse: float, final_mse: float):
        self.steps = steps
        self.initial_mse = initial_mse
        self.final_mse = final_mse

    @property
    def ratio(self) -> float:
        return self.final_mse / self.initial_mse if self.initial_mse > 0 else 0.0

    def to_text(self) -> str:
        return ("steps = " + str(self.steps) + "\ninitial_mse = " + repr(self.initial_mse)
                + "\nfinal_mse = " + repr(self.final_mse) + "\nratio = " + repr(self.ratio) + "\n")


def held_out_mse(state: ModelState, corpus: PairedCorpus, lq_encoder: Encoder = None) -> float:
    with torch.no_grad():
        target = encoder_forward(corpus.hq, EncoderKind.HQ, state)
        embedding = (lq_encoder or state.subnetwork("lq_encoder"))(corpus.lq)

        return float(dafe_alignment_loss(target, embedding))


# Trains only the LQ encoder to reproduce the frozen HQ encoder's embeddings of the clean faces
class DafeTrainingService:
    clock: Clock

    def __init__(self, clock: Clock):
        self.clock = clock

    @staticmethod
    def prod():
        return DafeTrainingService(Clock())

    def run(self, config: RunConfig, state: ModelState, train: PairedCorpus,
            held_out: PairedCorpus) -> AlignmentReport:
        state.require_initialized()

        if not state.flags[PRETRAINED_FLAG]:
            raise StateError("DAFE alignment needs a pretrained HQ encoder")

        state.flags[ALIGNED_FLAG] = 0
        state.thaw("lq_encoder")
        hq_fingerprint = state.fingerprint("hq_encoder")
        state.check_frozen("hq_encoder", hq_fingerprint)

        start = self.clock.seconds()
        initial = held_out_mse(state, held_out)
        logger.info("Aligning LQ encoder for " + str(config.dafe_steps) + " steps, held-out MSE " + str(initial))

        optimizer = state.optimizer("lq_encoder", config.encoder_lr)

        for step in range(config.dafe_steps):
            batch = train.subset(batch_indices(config.master_seed, STAGE, step, len(train), config.batch_size))

            with torch.no_grad():
                target = encoder_forward(batch.hq, EncoderKind.HQ, state)

            loss = dafe_alignment_loss(target, encoder_forward(batch.lq, EncoderKind.LQ, state))
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()

            if (step + 1) % config.log_interval == 0:
                logger.info("DAFE step " + str(step + 1) + " alignment " + str(float(loss)))

        state.release_optimizer("lq_encoder")
        state.check_frozen("hq_encoder", hq_fingerprint)

        state.flags[ALIGNED_FLAG] = 1
        state.apply_freezing()

        report = AlignmentReport(config.dafe_steps, initial, held_out_mse(state, held_out))
        logger.info("DAFE alignment done in " + str(round(self.clock.elapsed(start), 1)) + "s, held-out MSE "
                    + str(report.initial_mse) + " -> " + str(report.final_mse))

        return report
