import torch


def _as_tensor(score) -> torch.Tensor:
    return torch.as_tensor(score, dtype=torch.float64)


def hinge_gen_loss(scores: list) -> torch.Tensor:
    return sum((-_as_tensor(s).mean() for s in scores), torch.zeros((), dtype=torch.float64))


def hinge_disc_loss(real_scores: list, fake_scores: list) -> torch.Tensor:
    if len(real_scores) != len(fake_scores):
        raise ValueError("Real and fake scores must cover the same scales")

    loss = torch.zeros((), dtype=torch.float64)

    for real, fake in zip(real_scores, fake_scores):
        loss = loss + torch.relu(1.0 - _as_tensor(real)).mean() + torch.relu(1.0 + _as_tensor(fake)).mean()

    return loss
