from da_sfft.api import logger
from da_sfft.api.harness.config import RunConfig
from da_sfft.api.harness.corpus import PairedCorpus, batch_indices
from da_sfft.api.networks.state import PRETRAINED_FLAG, ModelState
from da_sfft.api.tensor.ops import mse
from da_sfft.api.utils.clock import Clock

STAGE = "pretrain"


# Trains the HQ encoder as the encoder half of an autoencoder on HQ faces, then freezes it
class EncoderPretrainingService:
    clock: Clock

    def __init__(self, clock: Clock):
        self.clock = clock

    @staticmethod
    def prod():
        return EncoderPretrainingService(Clock())

    def run(self, config: RunConfig, state: ModelState, corpus: PairedCorpus) -> list[float]:
        state.require_initialized()

        if state.flags[PRETRAINED_FLAG]:
            logger.info("HQ encoder already pretrained, skipping")
            return []

        start = self.clock.seconds()
        optimizer = state.optimizer("autoencoder", config.encoder_lr)
        losses = []

        logger.info("Pretraining HQ encoder for " + str(config.pretrain_steps) + " steps on "
                    + str(len(corpus)) + " faces")

        for step in range(config.pretrain_steps):
            batch = corpus.hq[batch_indices(config.master_seed, STAGE, step, len(corpus), config.batch_size)]

            loss = mse(state.hq_decoder(state.hq_encoder(batch)), batch)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            losses.append(float(loss))

            if (step + 1) % config.log_interval == 0:
                logger.info("Pretrain step " + str(step + 1) + " reconstruction " + str(losses[-1]))

        state.release_optimizer("autoencoder")
        state.flags[PRETRAINED_FLAG] = 1
        state.apply_freezing()

        logger.info("HQ encoder pretrained and frozen in " + str(round(self.clock.elapsed(start), 1)) + "s")
        return losses
