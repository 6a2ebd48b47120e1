import enum
import math


class Component(enum.IntEnum):
    Face = 0
    LeftEye = 1
    RightEye = 2
    Nose = 3
    Mouth = 4


COMPONENT_COUNT = len(Component)


def _outward(value: float, rounding) -> int:
    # snap products like 0.55 * 80 = 44.000000000000007 before rounding outward
    return int(rounding(round(value, 9)))


class ComponentBox:
    component: Component

    # Fractional box, (x0, y0) top left, (x1, y1) bottom right
    x0: float
    y0: float
    x1: float
    y1: float

    def __init__(self, component: Component, x0: float, y0: float, x1: float, y1: float):
        if not (0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1):
            raise ValueError("Invalid component box " + str((x0, y0, x1, y1)))

        self.component = component
        self.x0 = x0
        self.y0 = y0
        self.x1 = x1
        self.y1 = y1

    # Returns (top, bottom, left, right) on a height x width grid, rounded outward, at least 1x1
    def pixel_bounds(self, height: int, width: int) -> tuple[int, int, int, int]:
        top = min(max(_outward(self.y0 * height, math.floor), 0), height - 1)
        left = min(max(_outward(self.x0 * width, math.floor), 0), width - 1)
        bottom = min(max(_outward(self.y1 * height, math.ceil), top + 1), height)
        right = min(max(_outward(self.x1 * width, math.ceil), left + 1), width)

        return top, bottom, left, right


_BOXES = (
    ComponentBox(Component.Face, 0.0, 0.0, 1.0, 1.0),
    ComponentBox(Component.LeftEye, 0.20, 0.30, 0.45, 0.50),
    ComponentBox(Component.RightEye, 0.55, 0.30, 0.80, 0.50),
    ComponentBox(Component.Nose, 0.38, 0.45, 0.62, 0.70),
    ComponentBox(Component.Mouth, 0.30, 0.68, 0.70, 0.88),
)


def component_boxes() -> list[ComponentBox]:
    return list(_BOXES)
