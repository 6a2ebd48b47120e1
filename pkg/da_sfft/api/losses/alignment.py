import torch

from da_sfft.api.errors import ShapeError


def dafe_alignment_loss(hq_embedding: torch.Tensor, lq_embedding: torch.Tensor) -> torch.Tensor:
    if hq_embedding.shape[-1] != lq_embedding.shape[-1]:
        raise ShapeError("Embedding widths differ", hq_embedding.shape, lq_embedding.shape)

    return ((lq_embedding - hq_embedding) ** 2).mean()
