import torch

from da_sfft.api.errors import ShapeError
from da_sfft.api.facegen.components import Component, ComponentBox
from da_sfft.api.tensor.ops import DTYPE


class ComponentCrop:
    component: Component

    # Image crop [3,h,w] or [N,3,h,w]
    image: torch.Tensor

    # One-hot parsing crop [1,h,w] or [N,1,h,w]
    mask: torch.Tensor

    def __init__(self, component: Component, image: torch.Tensor, mask: torch.Tensor):
        self.component = component
        self.image = image
        self.mask = mask


# Crops every component box out of the scale-i image and its nearest-downsampled parsing map.
# The whole-face component keeps the full frame with an all-ones mask.
def extract_components(image: torch.Tensor, parsing: torch.Tensor, boxes: list[ComponentBox]) -> list[ComponentCrop]:
    if image.shape[-2:] != parsing.shape[-2:] or image.dim() != parsing.dim() + 1:
        raise ShapeError("Parsing map does not match the image", image.shape, parsing.shape)

    height, width = image.shape[-2:]
    crops = []

    for box in boxes:
        top, bottom, left, right = box.pixel_bounds(height, width)
        labels = parsing[..., top:bottom, left:right].unsqueeze(-3)

        if box.component is Component.Face:
            mask = torch.ones_like(labels, dtype=DTYPE)
        else:
            mask = (labels == int(box.component)).to(DTYPE)

        crops.append(ComponentCrop(box.component, image[..., top:bottom, left:right], mask))

    return crops
