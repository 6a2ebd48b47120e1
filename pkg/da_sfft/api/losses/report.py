import csv
import math
import os
from typing import Optional

import torch

LOG_FIELDS = ("step", "L_s", "L_rec", "L_G", "total", "L_D")


class LossWeights:
    lambda_s: float
    lambda_rec: float
    lambda_g: float

    def __init__(self, lambda_s: float = 1.0, lambda_rec: float = 10.0, lambda_g: float = 0.1):
        for value in (lambda_s, lambda_rec, lambda_g):
            if not math.isfinite(value) or value < 0:
                raise ValueError("Loss weights must be finite and nonnegative, got " + str(value))

        self.lambda_s = lambda_s
        self.lambda_rec = lambda_rec
        self.lambda_g = lambda_g


class LossReport:
    step: int
    style: float
    reconstruction: float
    adversarial: float
    total: float

    # Discriminator hinge loss of the same step, if one ran
    discriminator: Optional[float]

    # Weighted generator objective carrying the autograd graph
    objective: Optional[torch.Tensor]

    def __init__(self, step: int, style: float, reconstruction: float, adversarial: float, total: float,
                 discriminator: Optional[float] = None, objective: Optional[torch.Tensor] = None):
        self.step = step
        self.style = style
        self.reconstruction = reconstruction
        self.adversarial = adversarial
        self.total = total
        self.discriminator = discriminator
        self.objective = objective

    def row(self) -> list[str]:
        return [str(self.step), repr(self.style), repr(self.reconstruction), repr(self.adversarial),
                repr(self.total), "n/a" if self.discriminator is None else repr(self.discriminator)]


def total_gen_loss(style: torch.Tensor, reconstruction: torch.Tensor, adversarial: torch.Tensor,
                   weights: LossWeights, step: int = 0) -> LossReport:
    objective = weights.lambda_s * style + weights.lambda_rec * reconstruction + weights.lambda_g * adversarial

    terms = [float(style), float(reconstruction), float(adversarial)]
    total = weights.lambda_s * terms[0] + weights.lambda_rec * terms[1] + weights.lambda_g * terms[2]

    return LossReport(step, terms[0], terms[1], terms[2], total, objective=objective)


class TrainingLogRepository:
    def write(self, path: str, reports: list[LossReport]):
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(LOG_FIELDS)

            for report in reports:
                writer.writerow(report.row())

    def read(self, path: str) -> list[LossReport]:
        with open(path, newline="") as stream:
            rows = list(csv.DictReader(stream))

        return [LossReport(int(r["step"]), float(r["L_s"]), float(r["L_rec"]), float(r["L_G"]), float(r["total"]),
                           None if r["L_D"] == "n/a" else float(r["L_D"])) for r in rows]
