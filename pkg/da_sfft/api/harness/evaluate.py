from typing import Callable, Optional

import torch

from da_sfft.api import logger
from da_sfft.api.harness.corpus import CorpusService, PairedCorpus
from da_sfft.api.harness.restore import RestorationService
from da_sfft.api.metrics.quality import psnr, ssim
from da_sfft.api.metrics.report import EvalCsvRepository, MetricReport
from da_sfft.api.networks.forward import EncoderKind, encoder_forward
from da_sfft.api.networks.modules import Encoder
from da_sfft.api.networks.state import ModelState
from da_sfft.api.tensor.modules import initialize
from da_sfft.api.utils.seeding import SeedStream

# (lq, parsing, hq) => restored image
Restorer = Callable[[torch.Tensor, torch.Tensor, torch.Tensor], torch.Tensor]


class EmbeddingReport:
    samples: int

    # Mean ||E_HQ(H) - E_LQ(I)||^2 for the aligned and a fresh unaligned LQ encoder
    aligned_distance: float
    unaligned_distance: float

    # Share of samples where the aligned encoder lands closer
    closer_fraction: float

    def __init__(self, samples: int, aligned_distance: float, unaligned_distance: float, closer_fraction: float):
        self.samples = samples
        self.aligned_distance = aligned_distance
        self.unaligned_distance = unaligned_distance
        self.closer_fraction = closer_fraction

    def to_text(self) -> str:
        return ("samples = " + str(self.samples) + "\naligned_distance = " + repr(self.aligned_distance)
                + "\nunaligned_distance = " + repr(self.unaligned_distance)
                + "\ncloser_fraction = " + repr(self.closer_fraction) + "\n")


class Evaluation:
    restored: MetricReport
    baseline: MetricReport
    embedding: Optional[EmbeddingReport]

    def __init__(self, restored: MetricReport, baseline: MetricReport, embedding: Optional[EmbeddingReport]):
        self.restored = restored
        self.baseline = baseline
        self.embedding = embedding


def unaligned_encoder(state: ModelState, seed: int) -> Encoder:
    encoder = Encoder(state.config.embedding_width)
    initialize(encoder, SeedStream(seed).child("unaligned"), "lq_encoder.")
    return encoder


def embedding_report(state: ModelState, corpus: PairedCorpus, seed: int) -> EmbeddingReport:
    with torch.no_grad():
        target = encoder_forward(corpus.hq, EncoderKind.HQ, state)
        aligned = ((encoder_forward(corpus.lq, EncoderKind.LQ, state) - target) ** 2).sum(-1)
        unaligned = ((unaligned_encoder(state, seed)(corpus.lq) - target) ** 2).sum(-1)

    return EmbeddingReport(len(corpus), float(aligned.mean()), float(unaligned.mean()),
                           float((aligned < unaligned).to(torch.float64).mean()))


class EvaluationService:
    restoration: RestorationService
    corpora: CorpusService
    metrics: EvalCsvRepository

    def __init__(self, restoration: RestorationService, corpora: CorpusService, metrics: EvalCsvRepository):
        self.restoration = restoration
        self.corpora = corpora
        self.metrics = metrics

    @staticmethod
    def prod():
        return EvaluationService(RestorationService.prod(), CorpusService.prod(), EvalCsvRepository())

    # Per-sample PSNR/SSIM of the restoration and of the LQ input against the ground truth
    def evaluate(self, state: ModelState, corpus: PairedCorpus, seed: int,
                 restorer: Optional[Restorer] = None) -> Evaluation:
        if restorer is None:
            def restorer(lq, parsing, _):
                return self.restoration.restore(lq, parsing, state)[0]

        restored, baseline = MetricReport(), MetricReport()

        for i, name in enumerate(corpus.names):
            hq, lq = corpus.hq[i], corpus.lq[i]
            output = restorer(lq, corpus.parsing[i], hq)

            restored.add(name, psnr(output, hq), ssim(output, hq))
            baseline.add(name, psnr(lq, hq), ssim(lq, hq))

        embedding = embedding_report(state, corpus, seed) if state.mode.uses_dafe else None

        mean, lq_mean = restored.mean(), baseline.mean()
        logger.info("Evaluated " + str(len(corpus)) + " samples: PSNR " + str(round(mean.psnr, 4)) + " dB (LQ "
                    + str(round(lq_mean.psnr, 4)) + "), SSIM " + str(round(mean.ssim, 4)) + " (LQ "
                    + str(round(lq_mean.ssim, 4)) + ")")

        return Evaluation(restored, baseline, embedding)

    # Writes <csv>, <csv>.lq.csv and, for DAFE models, <csv>.embedding.txt
    def evaluate_manifest(self, model_path: str, manifest_path: str, csv_path: str, seed: int) -> Evaluation:
        state = self.restoration.load_trained(model_path)
        evaluation = self.evaluate(state, self.corpora.load(manifest_path), seed)

        self.metrics.write(csv_path, evaluation.restored)
        self.metrics.write(csv_path + ".lq.csv", evaluation.baseline)

        if evaluation.embedding is not None:
            with open(csv_path + ".embedding.txt", "w") as stream:
                stream.write(evaluation.embedding.to_text())

        return evaluation
