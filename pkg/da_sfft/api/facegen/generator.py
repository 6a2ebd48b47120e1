import numpy as np
import torch

from da_sfft.api.facegen.components import Component
from da_sfft.api.utils.seeding import SeedStream

MIN_RESOLUTION = 32
MAX_TEXTURE_AMPLITUDE = 0.05


class FaceSample:
    # RGB image [3,R,R] in [0, 1]
    image: torch.Tensor

    # Component labels [R,R], see Component
    parsing: torch.Tensor

    # Depth map [1,R,R], larger is farther away
    depth: torch.Tensor

    seed: int

    def __init__(self, image: torch.Tensor, parsing: torch.Tensor, depth: torch.Tensor, seed: int):
        self.image = image
        self.parsing = parsing
        self.depth = depth
        self.seed = seed

    @property
    def resolution(self) -> int:
        return self.image.shape[-1]


def _ellipse(xx, yy, cx, cy, rx, ry) -> np.ndarray:
    return ((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2 <= 1.0


def _triangle(xx, yy, apex_x, apex_y, base_y, half_width) -> np.ndarray:
    progress = (yy - apex_y) / (base_y - apex_y)
    return (progress >= 0) & (progress <= 1) & (np.abs(xx - apex_x) <= half_width * progress)


# Procedural face: geometric primitives with per-component palettes, texture noise and an analytic depth map.
# Component shapes are drawn strictly inside their component boxes and never overlap.
def generate_face(seed: int, resolution: int) -> FaceSample:
    if resolution < MIN_RESOLUTION or resolution % 4 != 0:
        raise ValueError("Resolution must be a multiple of 4 and at least " + str(MIN_RESOLUTION))

    stream = SeedStream(seed)
    geometry = stream.generator("geometry")
    palette = stream.generator("palette")

    centers = (np.arange(resolution) + 0.5) / resolution
    yy, xx = np.meshgrid(centers, centers, indexing="ij")

    background = palette.uniform(0.05, 0.95, size=3)
    skin = np.array([palette.uniform(0.55, 0.90), palette.uniform(0.40, 0.70), palette.uniform(0.30, 0.55)])
    eye = np.array([palette.uniform(0.05, 0.25), palette.uniform(0.10, 0.30), palette.uniform(0.25, 0.60)])
    nose = skin * palette.uniform(0.70, 0.85)
    mouth = np.array([palette.uniform(0.60, 0.85), palette.uniform(0.15, 0.30), palette.uniform(0.20, 0.35)])

    face_cx = 0.5 + geometry.uniform(-0.01, 0.01)
    face_cy = 0.52 + geometry.uniform(-0.01, 0.01)
    face_rx = geometry.uniform(0.40, 0.46)
    face_ry = geometry.uniform(0.44, 0.48)

    eye_rx = geometry.uniform(0.07, 0.10)
    eye_ry = geometry.uniform(0.035, 0.06)
    eye_cy = 0.40 + geometry.uniform(-0.01, 0.01)
    left_cx = 0.325 + geometry.uniform(-0.01, 0.01)
    right_cx = 0.675 + geometry.uniform(-0.01, 0.01)

    nose_x = 0.5 + geometry.uniform(-0.01, 0.01)
    nose_top = geometry.uniform(0.48, 0.52)
    nose_base = geometry.uniform(0.62, 0.66)
    nose_half_width = geometry.uniform(0.05, 0.09)

    mouth_cx = 0.5 + geometry.uniform(-0.01, 0.01)
    mouth_cy = 0.78 + geometry.uniform(-0.01, 0.01)
    mouth_rx = geometry.uniform(0.12, 0.17)
    mouth_ry = geometry.uniform(0.03, 0.06)

    face_mask = _ellipse(xx, yy, face_cx, face_cy, face_rx, face_ry)
    regions = (
        (Component.LeftEye, _ellipse(xx, yy, left_cx, eye_cy, eye_rx, eye_ry), eye),
        (Component.RightEye, _ellipse(xx, yy, right_cx, eye_cy, eye_rx, eye_ry), eye),
        (Component.Nose, _triangle(xx, yy, nose_x, nose_top, nose_base, nose_half_width), nose),
        (Component.Mouth, _ellipse(xx, yy, mouth_cx, mouth_cy, mouth_rx, mouth_ry), mouth),
    )

    image = np.broadcast_to(background[:, None, None], (3, resolution, resolution)).copy()
    image[:, face_mask] = skin[:, None]
    parsing = np.full((resolution, resolution), int(Component.Face), dtype=np.int64)

    for component, mask, color in regions:
        image[:, mask] = color[:, None]
        parsing[mask] = int(component)

    texture = stream.generator("texture")
    amplitude = texture.uniform(0.01, MAX_TEXTURE_AMPLITUDE)
    image = np.clip(image + texture.uniform(-amplitude, amplitude, size=image.shape), 0.0, 1.0)

    offset = stream.generator("depth").uniform(0.0, 0.2)
    far = 0.9 + offset
    near = 0.15 + offset
    bump = np.sqrt(np.clip(1.0 - ((xx - face_cx) / face_rx) ** 2 - ((yy - face_cy) / face_ry) ** 2, 0.0, None))
    nose_bump = 0.05 * np.exp(-(((xx - nose_x) / 0.06) ** 2 + ((yy - nose_base) / 0.08) ** 2))
    depth = np.clip(far - (far - near) * bump - nose_bump * face_mask, 0.0, None)

    return FaceSample(
        torch.from_numpy(image),
        torch.from_numpy(parsing),
        torch.from_numpy(depth[None]),
        seed
    )
