import os

import torch

from da_sfft.api import logger
from da_sfft.api.degradation.model import degrade, make_rain_layer, transmission_map
from da_sfft.api.degradation.params import DegradationParams, sample_params
from da_sfft.api.degradation.repository import DegradationParamsRepository
from da_sfft.api.facegen.generator import FaceSample
from da_sfft.api.facegen.repository import CorpusRepository, ManifestRow, save_image
from da_sfft.api.facegen.service import MANIFEST_NAME
from da_sfft.api.tensor.repository import TensorRepository
from da_sfft.api.utils.seeding import SeedStream


class DegradedSample:
    sample: FaceSample
    lq: torch.Tensor
    params: DegradationParams

    def __init__(self, sample: FaceSample, lq: torch.Tensor, params: DegradationParams):
        self.sample = sample
        self.lq = lq
        self.params = params


class DegradationService:
    corpus: CorpusRepository
    params: DegradationParamsRepository
    tensors: TensorRepository

    def __init__(self, corpus: CorpusRepository, params: DegradationParamsRepository, tensors: TensorRepository):
        self.corpus = corpus
        self.params = params
        self.tensors = tensors

    @staticmethod
    def prod():
        return DegradationService(CorpusRepository(), DegradationParamsRepository(), TensorRepository())

    # Blind degradation of one sample; the draw only depends on (seed, sample seed)
    def degrade_sample(self, sample: FaceSample, seed: int, m_range: tuple[int, int]) -> DegradedSample:
        params = sample_params(SeedStream(seed).seed("degrade", sample.seed), m_range)
        return DegradedSample(sample, degrade(sample.image, sample.depth, params), params)

    def degrade_manifest(self, manifest_path: str, seed: int, m_range: tuple[int, int], out_dir: str,
                         dump_layers: bool = False) -> list[ManifestRow]:
        base_dir = os.path.dirname(os.path.abspath(manifest_path))
        os.makedirs(out_dir, exist_ok=True)
        rows = []

        for row in self.corpus.read_manifest(manifest_path):
            degraded = self.degrade_sample(self.corpus.load_sample(row, base_dir), seed, m_range)
            name = os.path.splitext(os.path.basename(row.image_path))[0]

            lq_path = name + ".lq.ppm"
            params_path = name + ".params.txt"
            save_image(os.path.join(out_dir, lq_path), degraded.lq)
            self.params.save(os.path.join(out_dir, params_path), degraded.params)

            if dump_layers:
                self._dump_layers(degraded, os.path.join(out_dir, name))

            rows.append(ManifestRow(
                row.seed,
                self._relative(base_dir, row.image_path, out_dir),
                self._relative(base_dir, row.parsing_path, out_dir),
                self._relative(base_dir, row.depth_path, out_dir),
                lq_path,
                params_path
            ))

        manifest = os.path.join(out_dir, MANIFEST_NAME)
        self.corpus.write_manifest(manifest, rows)
        logger.info("Degraded " + str(len(rows)) + " samples into " + manifest)

        return rows

    # Replays a stored parameter draw on a sample
    def replay(self, sample: FaceSample, params_path: str) -> torch.Tensor:
        return degrade(sample.image, sample.depth, self.params.load(params_path))

    def _dump_layers(self, degraded: DegradedSample, prefix: str):
        shape = tuple(degraded.sample.image.shape[-2:])
        self.tensors.save(prefix + ".transmission.tens",
                          transmission_map(degraded.sample.depth, degraded.params.beta).t)

        for i, layer in enumerate(degraded.params.rain_layers):
            self.tensors.save(prefix + ".rain" + str(i) + ".tens", make_rain_layer(shape, layer))

    @staticmethod
    def _relative(base_dir: str, path: str, out_dir: str) -> str:
        return os.path.relpath(os.path.join(base_dir, path), os.path.abspath(out_dir))
