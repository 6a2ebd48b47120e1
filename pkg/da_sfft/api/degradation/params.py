from typing import Optional

from da_sfft.api.utils.seeding import SeedStream

BLUR_RANGE = (0.0, 2.5)
DOWN_TARGET_RANGE = (32, 256)
BETA_RANGE = (2.6, 4.6)
ATMOSPHERE_RANGE = (0.1, 0.8)
NOISE_MEAN_RANGE = (-1.0, -0.8)
NOISE_STD_RANGE = (0.7, 1.0)

RAIN_LENGTH = 45
RAIN_ANGLES = (55, 80, 90, 110, 125)

DEFAULT_M_RANGE = (1, 3)


class RainLayerParams:
    noise_mean: float
    noise_std: float

    # Motion filter length in pixels
    motion_length: int

    # Motion filter angle in degrees
    motion_angle: float

    layer_seed: int

    def __init__(self, noise_mean: float, noise_std: float, motion_length: int, motion_angle: float,
                 layer_seed: int):
        self.noise_mean = noise_mean
        self.noise_std = noise_std
        self.motion_length = motion_length
        self.motion_angle = motion_angle
        self.layer_seed = layer_seed

    def __eq__(self, other) -> bool:
        return isinstance(other, RainLayerParams) and vars(self) == vars(other)


class DegradationParams:
    # Gaussian blur standard deviation
    blur_sigma: float

    # Shorter image side after downsampling, in pixels
    down_target: int

    rain_layers: list[RainLayerParams]

    # Scattering coefficient of the transmission map
    beta: float

    # Atmospheric light per RGB channel
    atmospheric: tuple[float, float, float]

    master_seed: int

    def __init__(self, blur_sigma: float, down_target: int, rain_layers: list[RainLayerParams], beta: float,
                 atmospheric: tuple[float, float, float], master_seed: int):
        if blur_sigma < 0:
            raise ValueError("Blur sigma must be non-negative")

        if beta <= 0:
            raise ValueError("Beta must be positive")

        if len(atmospheric) != 3:
            raise ValueError("Atmospheric light needs one value per RGB channel")

        self.blur_sigma = blur_sigma
        self.down_target = down_target
        self.rain_layers = rain_layers
        self.beta = beta
        self.atmospheric = tuple(atmospheric)
        self.master_seed = master_seed

    def __eq__(self, other) -> bool:
        return isinstance(other, DegradationParams) and vars(self) == vars(other)

    # Renders the parameters as key = value lines, floats in round-trip precision
    def to_text(self) -> str:
        lines = [
            "master_seed = " + str(self.master_seed),
            "blur_sigma = " + repr(self.blur_sigma),
            "down_target = " + str(self.down_target),
            "beta = " + repr(self.beta),
            "atmospheric = " + ", ".join(repr(a) for a in self.atmospheric),
            "rain_layers = " + str(len(self.rain_layers)),
        ]

        for i, layer in enumerate(self.rain_layers):
            prefix = "rain." + str(i) + "."
            lines.append(prefix + "noise_mean = " + repr(layer.noise_mean))
            lines.append(prefix + "noise_std = " + repr(layer.noise_std))
            lines.append(prefix + "motion_length = " + str(layer.motion_length))
            lines.append(prefix + "motion_angle = " + repr(layer.motion_angle))
            lines.append(prefix + "layer_seed = " + str(layer.layer_seed))

        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str):
        values = {}

        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()

            if not line:
                continue

            if "=" not in line:
                raise ValueError("Expected key = value, got: " + line)

            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()

        try:
            layers = []

            for i in range(int(values["rain_layers"])):
                prefix = "rain." + str(i) + "."
                layers.append(RainLayerParams(
                    float(values[prefix + "noise_mean"]),
                    float(values[prefix + "noise_std"]),
                    int(values[prefix + "motion_length"]),
                    float(values[prefix + "motion_angle"]),
                    int(values[prefix + "layer_seed"])
                ))

            return DegradationParams(
                float(values["blur_sigma"]),
                int(values["down_target"]),
                layers,
                float(values["beta"]),
                tuple(float(a) for a in values["atmospheric"].split(",")),
                int(values["master_seed"])
            )
        except KeyError as e:
            raise ValueError("Missing degradation parameter " + str(e)) from e


# Draws one blind degradation from independent named substreams of the master seed
def sample_params(master_seed: int, m_range: Optional[tuple[int, int]] = None) -> DegradationParams:
    m_min, m_max = DEFAULT_M_RANGE if m_range is None else m_range

    if m_min < 0 or m_min > m_max:
        raise ValueError("Invalid rain layer count range " + str((m_min, m_max)))

    stream = SeedStream(master_seed)

    blur_sigma = float(stream.generator("blur").uniform(*BLUR_RANGE))
    down_target = int(stream.generator("scale").integers(DOWN_TARGET_RANGE[0], DOWN_TARGET_RANGE[1] + 1))
    beta = float(stream.generator("haze").uniform(*BETA_RANGE))
    atmospheric = tuple(float(a) for a in stream.generator("atmosphere").uniform(*ATMOSPHERE_RANGE, size=3))
    count = int(stream.generator("rain-count").integers(m_min, m_max + 1))

    layers = []

    for i in range(count):
        rng = stream.generator("rain", i)
        layers.append(RainLayerParams(
            float(rng.uniform(*NOISE_MEAN_RANGE)),
            float(rng.uniform(*NOISE_STD_RANGE)),
            RAIN_LENGTH,
            float(RAIN_ANGLES[int(rng.integers(0, len(RAIN_ANGLES)))]),
            stream.seed("rain-noise", i)
        ))

    return DegradationParams(blur_sigma, down_target, layers, beta, atmospheric, master_seed)
