from typing import Iterable

import torch

from da_sfft.api.errors import ShapeError

BETA_1 = 0.9
BETA_2 = 0.999
EPSILON = 1e-8

_MOMENTS = ("exp_avg", "exp_avg_sq")


# Bias-corrected Adam over one parameter group, with exportable moments
class AdamState:
    params: list[torch.Tensor]
    learning_rate: float
    optimizer: torch.optim.Adam

    def __init__(self, params: Iterable[torch.Tensor], learning_rate: float, beta1: float = BETA_1,
                 beta2: float = BETA_2, epsilon: float = EPSILON):
        self.params = list(params)
        self.learning_rate = learning_rate
        self.optimizer = torch.optim.Adam(self.params, lr=learning_rate, betas=(beta1, beta2), eps=epsilon,
                                          foreach=False)

    @property
    def step_count(self) -> int:
        steps = [int(state["step"]) for state in self.optimizer.state.values() if "step" in state]
        return max(steps) if steps else 0

    # Returns (first moment, second moment); zeros before the first update
    def moments(self, param: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        state = self.optimizer.state.get(param, {})

        return (state.get("exp_avg", torch.zeros_like(param)).detach(),
                state.get("exp_avg_sq", torch.zeros_like(param)).detach())

    def zero_grad(self):
        self.optimizer.zero_grad(set_to_none=True)

    def step(self):
        self.optimizer.step()

    # Flat name => tensor view of the optimizer state, step counters as one-element tensors
    def export(self, names: dict[int, str]) -> dict[str, torch.Tensor]:
        exported = {}

        for param in self.params:
            state = self.optimizer.state.get(param)

            if not state:
                continue

            name = names[id(param)]
            exported[name + ".step"] = torch.tensor([float(state["step"])], dtype=torch.float64)

            for key in _MOMENTS:
                exported[name + "." + key] = state[key].detach().clone()

        return exported

    def restore(self, names: dict[int, str], tensors: dict[str, torch.Tensor]):
        for param in self.params:
            name = names[id(param)]

            if name + ".step" not in tensors:
                continue

            self.optimizer.state[param] = {
                "step": torch.tensor(tensors[name + ".step"].item(), dtype=torch.float32),
                "exp_avg": tensors[name + ".exp_avg"].clone().reshape(param.shape),
                "exp_avg_sq": tensors[name + ".exp_avg_sq"].clone().reshape(param.shape),
            }


# Updates params alone; grads held by the other registered parameters are set aside for the step
def adam_step(state: AdamState, params: torch.Tensor, grads: torch.Tensor) -> torch.Tensor:
    if params.shape != grads.shape:
        raise ShapeError("Gradient shape differs from parameter shape", params.shape, grads.shape)

    if not any(params is p for p in state.params):
        raise ValueError("Parameter is not registered with this optimizer state")

    others = [p for p in state.params if p is not params]
    held = [p.grad for p in others]

    for p in others:
        p.grad = None

    try:
        params.grad = grads.detach().clone()
        state.step()
    finally:
        params.grad = None

        for p, grad in zip(others, held):
            p.grad = grad

    return params
