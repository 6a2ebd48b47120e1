import os

from da_sfft.api import logger
from da_sfft.api.facegen.generator import generate_face
from da_sfft.api.facegen.repository import CorpusRepository, ManifestRow
from da_sfft.api.utils.seeding import SeedStream

MANIFEST_NAME = "manifest.csv"


def sample_name(index: int) -> str:
    return "face_{:05d}".format(index)


class CorpusGenerationService:
    corpus: CorpusRepository

    def __init__(self, corpus: CorpusRepository):
        self.corpus = corpus

    @staticmethod
    def prod():
        return CorpusGenerationService(CorpusRepository())

    # Generates count faces from per-sample substreams of the seed and writes them with a manifest
    def generate(self, seed: int, count: int, resolution: int, out_dir: str) -> list[ManifestRow]:
        if count < 1:
            raise ValueError("Corpus size must be positive, got " + str(count))

        stream = SeedStream(seed)
        rows = []

        for index in range(count):
            sample = generate_face(stream.seed("face", index), resolution)
            rows.append(self.corpus.save_sample(sample, out_dir, sample_name(index)))

        manifest = os.path.join(out_dir, MANIFEST_NAME)
        self.corpus.write_manifest(manifest, rows)
        logger.info("Generated " + str(count) + " faces at " + str(resolution) + "px into " + manifest)

        return rows
