import os

import torch

from da_sfft.api import logger
from da_sfft.api.errors import StateError
from da_sfft.api.facegen.repository import CorpusRepository, load_image, load_labels, save_image
from da_sfft.api.networks.forward import ForwardTape, GeneratorMode, generator_forward
from da_sfft.api.networks.repository import ModelStateRepository
from da_sfft.api.networks.state import GAN_STEPS_FLAG, ModelState


class RestorationService:
    models: ModelStateRepository
    corpus: CorpusRepository

    def __init__(self, models: ModelStateRepository, corpus: CorpusRepository):
        self.models = models
        self.corpus = corpus

    @staticmethod
    def prod():
        return RestorationService(ModelStateRepository(), CorpusRepository())

    def load_trained(self, model_path: str) -> ModelState:
        state = self.models.load(model_path)

        if not state.flags[GAN_STEPS_FLAG]:
            raise StateError("Model " + model_path + " has not been trained")

        return state

    # Infer-mode restoration; degradation statistics come from the LQ encoder only
    def restore(self, lq: torch.Tensor, parsing: torch.Tensor, state: ModelState) -> tuple[torch.Tensor, ForwardTape]:
        with torch.no_grad():
            return generator_forward(lq, parsing, state, GeneratorMode.Infer)

    def restore_file(self, model_path: str, lq_path: str, parsing_path: str, out_path: str):
        state = self.load_trained(model_path)
        restored, _ = self.restore(load_image(lq_path), load_labels(parsing_path), state)

        save_image(out_path, restored)
        logger.info("Restored " + lq_path + " into " + out_path)

    # Restores every row of a degraded manifest into out_dir as <name>.restored.ppm
    def restore_manifest(self, model_path: str, manifest_path: str, out_dir: str) -> list[str]:
        state = self.load_trained(model_path)
        base_dir = os.path.dirname(os.path.abspath(manifest_path))
        os.makedirs(out_dir, exist_ok=True)
        written = []

        for row in self.corpus.read_manifest(manifest_path):
            lq = self.corpus.load_lq(row, base_dir)
            parsing = load_labels(os.path.join(base_dir, row.parsing_path))
            restored, _ = self.restore(lq, parsing, state)

            name = os.path.splitext(os.path.basename(row.image_path))[0] + ".restored.ppm"
            save_image(os.path.join(out_dir, name), restored)
            written.append(name)

        logger.info("Restored " + str(len(written)) + " images into " + out_dir)
        return written
