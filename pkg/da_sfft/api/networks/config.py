import enum

from da_sfft.api.errors import ConfigError
from da_sfft.api.facegen.components import COMPONENT_COUNT

START_SIZE = 4
DEFAULT_CHANNELS = (64, 64, 32, 16, 8)


class AblationMode(enum.Enum):
    # One whole-face component, no DAFE path
    GlobalSft = "global_sft"
    SfftOnly = "sfft_only"
    SfftDafe = "sfft_dafe"

    @staticmethod
    def parse(value: str):
        try:
            return AblationMode(value.strip().lower())
        except ValueError:
            raise ConfigError("Unknown ablation mode " + value)

    @property
    def uses_dafe(self) -> bool:
        return self is AblationMode.SfftDafe

    @property
    def components(self) -> int:
        return 1 if self is AblationMode.GlobalSft else COMPONENT_COUNT


class GeneratorConfig:
    # Output side length R
    resolution: int

    # Channel width C_i of every scale level, coarse to fine
    channels: tuple[int, ...]

    # Channels of the fixed start tensor F^0
    base_channels: int

    # Width of the hidden conv blocks inside the SFF and attention stacks
    hidden_width: int

    # Width E of encoder embeddings
    embedding_width: int

    def __init__(self, resolution: int = 64, channels: tuple[int, ...] = DEFAULT_CHANNELS,
                 base_channels: int = None, hidden_width: int = 16, embedding_width: int = 64):
        self.resolution = int(resolution)
        self.channels = tuple(int(c) for c in channels)
        self.base_channels = int(base_channels) if base_channels is not None else self.channels[0]
        self.hidden_width = int(hidden_width)
        self.embedding_width = int(embedding_width)

        self.validate()

    @property
    def scales(self) -> int:
        return len(self.channels)

    def scale_resolution(self, index: int) -> int:
        return START_SIZE * 2 ** index

    def upsample_factor(self, index: int) -> int:
        return 1 if index == 0 else 2

    def validate(self):
        if not self.channels or min(self.channels) < 1:
            raise ConfigError("Channel schedule must be non-empty and positive: " + str(self.channels))

        if self.scale_resolution(self.scales - 1) != self.resolution:
            raise ConfigError("Resolution " + str(self.resolution) + " does not match "
                              + str(self.scales) + " scales starting at " + str(START_SIZE))

        if self.resolution < 16:
            raise ConfigError("Resolution must be at least 16, got " + str(self.resolution))

        if min(self.base_channels, self.hidden_width, self.embedding_width) < 1:
            raise ConfigError("Widths must be positive")

    def __eq__(self, other):
        return isinstance(other, GeneratorConfig) and vars(self) == vars(other)
