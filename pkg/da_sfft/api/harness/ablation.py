from da_sfft.api import logger
from da_sfft.api.harness.config import RunConfig
from da_sfft.api.harness.corpus import PairedCorpus
from da_sfft.api.harness.dafe import DafeTrainingService
from da_sfft.api.harness.gan import GanTrainingService, corpus_reconstruction_loss
from da_sfft.api.harness.pretrain import EncoderPretrainingService
from da_sfft.api.networks.config import AblationMode
from da_sfft.api.networks.state import ALIGNED_FLAG, PRETRAINED_FLAG, ModelState

# Expected ordering by train-set reconstruction loss, best first
EXPECTED_ORDER = (AblationMode.SfftDafe, AblationMode.SfftOnly, AblationMode.GlobalSft)


class AblationResult:
    mode: AblationMode

    # Mean train-set reconstruction loss after the shared step budget
    reconstruction_loss: float

    def __init__(self, mode: AblationMode, reconstruction_loss: float):
        self.mode = mode
        self.reconstruction_loss = reconstruction_loss


class AblationReport:
    results: list[AblationResult]

    # (better expected, worse expected) pairs whose losses came out the other way round
    inversions: list[tuple[AblationMode, AblationMode]]

    def __init__(self, results: list[AblationResult]):
        self.results = results

        losses = {r.mode: r.reconstruction_loss for r in results}
        ordered = [mode for mode in EXPECTED_ORDER if mode in losses]
        self.inversions = [(a, b) for i, a in enumerate(ordered) for b in ordered[i + 1:] if losses[a] > losses[b]]

    def to_text(self) -> str:
        lines = [r.mode.value + ".reconstruction_loss = " + repr(r.reconstruction_loss) for r in self.results]
        lines.append("inversions = " + ", ".join(a.value + ">" + b.value for a, b in self.inversions))

        return "\n".join(lines) + "\n"


# Trains every configuration from the same pretrained encoders with equal step budgets
class AblationService:
    pretraining: EncoderPretrainingService
    dafe: DafeTrainingService
    gan: GanTrainingService

    def __init__(self, pretraining: EncoderPretrainingService, dafe: DafeTrainingService, gan: GanTrainingService):
        self.pretraining = pretraining
        self.dafe = dafe
        self.gan = gan

    @staticmethod
    def prod():
        return AblationService(EncoderPretrainingService.prod(), DafeTrainingService.prod(), GanTrainingService.prod())

    def run(self, config: RunConfig, train: PairedCorpus, held_out: PairedCorpus,
            modes: tuple[AblationMode, ...] = EXPECTED_ORDER) -> AblationReport:
        generator_config = config.generator_config()

        base = ModelState.create(generator_config, AblationMode.SfftDafe, config.master_seed)
        self.pretraining.run(config, base, train)
        if AblationMode.SfftDafe in modes:
            self.dafe.run(config, base, train, held_out)

        results = []

        for mode in modes:
            state = ModelState.create(generator_config, mode, config.master_seed)
            state.hq_encoder.load_state_dict(base.hq_encoder.state_dict())
            state.hq_decoder.load_state_dict(base.hq_decoder.state_dict())
            state.flags[PRETRAINED_FLAG] = 1

            if mode.uses_dafe:
                state.lq_encoder.load_state_dict(base.lq_encoder.state_dict())
                state.flags[ALIGNED_FLAG] = 1

            state.apply_freezing()
            self.gan.run(config, state, train)

            loss = corpus_reconstruction_loss(state, train, config.batch_size)
            results.append(AblationResult(mode, loss))
            logger.info("Ablation " + mode.value + " train reconstruction loss " + str(loss))

        report = AblationReport(results)

        for better, worse in report.inversions:
            logger.warning("Ablation ordering inverted: " + better.value + " ended above " + worse.value)

        return report
