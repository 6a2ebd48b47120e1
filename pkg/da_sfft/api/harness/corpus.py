import os

import numpy as np
import torch

from da_sfft.api import logger
from da_sfft.api.degradation.service import DegradationService
from da_sfft.api.facegen.generator import generate_face
from da_sfft.api.facegen.repository import CorpusRepository
from da_sfft.api.facegen.service import sample_name
from da_sfft.api.utils.seeding import SeedStream


# Stacked (HQ, LQ, parsing) triples
class PairedCorpus:
    names: list[str]

    # [N,3,R,R]
    hq: torch.Tensor
    lq: torch.Tensor

    # [N,R,R] integer labels
    parsing: torch.Tensor

    def __init__(self, names: list[str], hq: torch.Tensor, lq: torch.Tensor, parsing: torch.Tensor):
        if not (len(names) == hq.shape[0] == lq.shape[0] == parsing.shape[0]):
            raise ValueError("Corpus tensors disagree on the sample count")

        self.names = names
        self.hq = hq
        self.lq = lq
        self.parsing = parsing

    def __len__(self):
        return len(self.names)

    @property
    def resolution(self) -> int:
        return self.hq.shape[-1]

    def subset(self, indices) -> "PairedCorpus":
        indices = [int(i) for i in indices]
        return PairedCorpus([self.names[i] for i in indices], self.hq[indices], self.lq[indices],
                            self.parsing[indices])


# Batch indices of one training step, drawn from the (seed, stage, step) substream
def batch_indices(seed: int, stage: str, step: int, size: int, batch_size: int) -> np.ndarray:
    generator = SeedStream(seed).generator(stage, step)
    return generator.choice(size, size=batch_size, replace=size < batch_size)


class CorpusService:
    degradation: DegradationService
    corpus: CorpusRepository

    def __init__(self, degradation: DegradationService, corpus: CorpusRepository):
        self.degradation = degradation
        self.corpus = corpus

    @staticmethod
    def prod():
        return CorpusService(DegradationService.prod(), CorpusRepository())

    # In-memory corpus; train and test splits use disjoint face substreams
    def synthesize(self, seed: int, split: str, count: int, resolution: int,
                   m_range: tuple[int, int]) -> PairedCorpus:
        stream = SeedStream(seed)
        names, hq, lq, parsing = [], [], [], []

        for index in range(count):
            sample = generate_face(stream.seed("corpus", split, index), resolution)
            degraded = self.degradation.degrade_sample(sample, seed, m_range)

            names.append(split + "_" + sample_name(index))
            hq.append(sample.image)
            lq.append(degraded.lq)
            parsing.append(sample.parsing)

        logger.info("Synthesized " + str(count) + " " + split + " pairs at " + str(resolution) + "px")
        return PairedCorpus(names, torch.stack(hq), torch.stack(lq), torch.stack(parsing))

    # Corpus of a degraded manifest as written by `degrade`
    def load(self, manifest_path: str) -> PairedCorpus:
        base_dir = os.path.dirname(os.path.abspath(manifest_path))
        names, hq, lq, parsing = [], [], [], []

        for row in self.corpus.read_manifest(manifest_path):
            sample = self.corpus.load_sample(row, base_dir)

            names.append(os.path.splitext(os.path.basename(row.image_path))[0])
            hq.append(sample.image)
            lq.append(self.corpus.load_lq(row, base_dir))
            parsing.append(sample.parsing)

        if not names:
            raise ValueError("Manifest " + manifest_path + " is empty")

        return PairedCorpus(names, torch.stack(hq), torch.stack(lq), torch.stack(parsing))
