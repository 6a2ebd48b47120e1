import math
from typing import Callable

import torch

DEFAULT_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-4

# Norm floor of the relative error, keeps near-zero gradients from dividing by zero
NORM_FLOOR = 1e-6


class GradientCheck:
    name: str

    # ||analytic - numeric|| / max(||analytic||, ||numeric||)
    relative_error: float

    tolerance: float

    def __init__(self, name: str, relative_error: float, tolerance: float):
        self.name = name
        self.relative_error = relative_error
        self.tolerance = tolerance

    @property
    def passed(self) -> bool:
        return self.relative_error < self.tolerance

    def render(self) -> str:
        return "{} {} rel_err={:.3e}".format("PASS" if self.passed else "FAIL", self.name, self.relative_error)


# Central-difference gradient of a scalar function, one coordinate at a time
def finite_diff_grad(f: Callable[[torch.Tensor], torch.Tensor], x: torch.Tensor,
                     h: float = DEFAULT_STEP) -> torch.Tensor:
    point = x.detach().clone()
    grad = torch.zeros_like(point)
    coordinates = point.view(-1)
    grad_view = grad.view(-1)

    with torch.no_grad():
        for i in range(coordinates.numel()):
            original = coordinates[i].item()

            coordinates[i] = original + h
            plus = float(f(point))
            coordinates[i] = original - h
            minus = float(f(point))
            coordinates[i] = original

            if not (math.isfinite(plus) and math.isfinite(minus)):
                raise FloatingPointError("Function is not finite near coordinate " + str(i))

            grad_view[i] = (plus - minus) / (2 * h)

    return grad


def analytic_grad(f: Callable[[torch.Tensor], torch.Tensor], x: torch.Tensor) -> torch.Tensor:
    point = x.detach().clone().requires_grad_(True)
    value = f(point)

    grad, = torch.autograd.grad(value, point, allow_unused=True)
    return torch.zeros_like(point) if grad is None else grad


def relative_error(a: torch.Tensor, b: torch.Tensor) -> float:
    denominator = max(a.norm().item(), b.norm().item(), NORM_FLOOR)
    return (a - b).norm().item() / denominator


def check_gradient(name: str, f: Callable[[torch.Tensor], torch.Tensor], x: torch.Tensor,
                   tolerance: float = DEFAULT_TOLERANCE, h: float = DEFAULT_STEP) -> GradientCheck:
    return GradientCheck(name, relative_error(analytic_grad(f, x), finite_diff_grad(f, x, h)), tolerance)
