import csv
import os
from typing import Optional

import numpy as np
import torch
from PIL import Image

from da_sfft.api.facegen.generator import FaceSample
from da_sfft.api.tensor.ops import DTYPE
from da_sfft.api.tensor.repository import TensorRepository

MANIFEST_FIELDS = ["seed", "image_path", "parsing_path", "depth_path"]
DEGRADED_FIELDS = MANIFEST_FIELDS + ["lq_path", "params_path"]


class ManifestRow:
    seed: int
    image_path: str
    parsing_path: str
    depth_path: str

    # Set for degraded corpora only
    lq_path: Optional[str]
    params_path: Optional[str]

    def __init__(self, seed: int, image_path: str, parsing_path: str, depth_path: str,
                 lq_path: Optional[str] = None, params_path: Optional[str] = None):
        self.seed = seed
        self.image_path = image_path
        self.parsing_path = parsing_path
        self.depth_path = depth_path
        self.lq_path = lq_path
        self.params_path = params_path

    @property
    def is_degraded(self) -> bool:
        return self.lq_path is not None

    def render(self) -> dict:
        row = {
            "seed": self.seed,
            "image_path": self.image_path,
            "parsing_path": self.parsing_path,
            "depth_path": self.depth_path
        }

        if self.is_degraded:
            row["lq_path"] = self.lq_path
            row["params_path"] = self.params_path

        return row


# 8-bit binary PPM for RGB, PGM for labels
def save_image(path: str, image: torch.Tensor):
    pixels = np.round(image.detach().clamp(0, 1).numpy() * 255).astype(np.uint8)
    Image.fromarray(np.ascontiguousarray(pixels.transpose(1, 2, 0))).save(path, format="PPM")


def load_image(path: str) -> torch.Tensor:
    with Image.open(path) as image:
        pixels = np.asarray(image.convert("RGB"), dtype=np.float64) / 255.0

    return torch.from_numpy(pixels.transpose(2, 0, 1).copy()).to(DTYPE)


def save_labels(path: str, labels: torch.Tensor):
    Image.fromarray(labels.numpy().astype(np.uint8)).save(path, format="PPM")


def load_labels(path: str) -> torch.Tensor:
    with Image.open(path) as image:
        return torch.from_numpy(np.asarray(image.convert("L"), dtype=np.int64).copy())


class CorpusRepository:
    tensors: TensorRepository

    def __init__(self, tensors: Optional[TensorRepository] = None):
        self.tensors = TensorRepository() if tensors is None else tensors

    # Writes image, parsing and depth files of one sample, returns the manifest row (paths relative to out_dir)
    def save_sample(self, sample: FaceSample, out_dir: str, name: str) -> ManifestRow:
        os.makedirs(out_dir, exist_ok=True)
        row = ManifestRow(sample.seed, name + ".ppm", name + ".pgm", name + ".depth.tens")

        save_image(os.path.join(out_dir, row.image_path), sample.image)
        save_labels(os.path.join(out_dir, row.parsing_path), sample.parsing)
        self.tensors.save(os.path.join(out_dir, row.depth_path), sample.depth)

        return row

    def load_sample(self, row: ManifestRow, base_dir: str) -> FaceSample:
        return FaceSample(
            load_image(os.path.join(base_dir, row.image_path)),
            load_labels(os.path.join(base_dir, row.parsing_path)),
            self.tensors.load(os.path.join(base_dir, row.depth_path)),
            row.seed
        )

    def load_lq(self, row: ManifestRow, base_dir: str) -> torch.Tensor:
        if not row.is_degraded:
            raise ValueError("Manifest row of seed " + str(row.seed) + " has no degraded image")

        return load_image(os.path.join(base_dir, row.lq_path))

    def write_manifest(self, path: str, rows: list[ManifestRow]):
        fields = DEGRADED_FIELDS if rows and rows[0].is_degraded else MANIFEST_FIELDS

        with open(path, "w", newline="") as stream:
            writer = csv.DictWriter(stream, fieldnames=fields)
            writer.writeheader()

            for row in rows:
                writer.writerow(row.render())

    def read_manifest(self, path: str) -> list[ManifestRow]:
        rows = []

        with open(path, newline="") as stream:
            reader = csv.DictReader(stream, skipinitialspace=True)

            missing = [f for f in MANIFEST_FIELDS if f not in (reader.fieldnames or [])]
            if missing:
                raise ValueError("Manifest " + path + " lacks columns " + ", ".join(missing))

            for record in reader:
                rows.append(ManifestRow(
                    int(record["seed"]),
                    record["image_path"],
                    record["parsing_path"],
                    record["depth_path"],
                    record.get("lq_path") or None,
                    record.get("params_path") or None
                ))

        return rows
