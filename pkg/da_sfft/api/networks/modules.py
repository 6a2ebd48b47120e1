import torch
from torch import nn

from da_sfft.api.networks.config import START_SIZE, GeneratorConfig
from da_sfft.api.sfft.weights import SFFTWeights
from da_sfft.api.tensor.modules import ConvLayer, LinearLayer
from da_sfft.api.tensor.ops import DTYPE, Activation, Resample, global_average_pool, pointwise, upsample

DISCRIMINATOR_SCALES = (1.0, 0.5, 0.25)
DISCRIMINATOR_WIDTHS = (16, 32, 64, 64)
ENCODER_WIDTHS = (16, 32, 64, 64)


class Generator(nn.Module):
    def __init__(self, config: GeneratorConfig, components: int):
        super().__init__()

        self.register_buffer("start", torch.zeros(config.base_channels, START_SIZE, START_SIZE, dtype=DTYPE))

        widths = (config.base_channels,) + config.channels
        self.scales = nn.ModuleList(
            SFFTWeights(a, b, components, config.hidden_width) for a, b in zip(widths[:-1], widths[1:]))
        self.to_rgb = ConvLayer(config.channels[-1], 3)


# Four stride-2 conv blocks whose activations double as feature-matching layers
class ConvTrunk(nn.Module):
    def __init__(self, widths: tuple[int, ...], in_channels: int = 3):
        super().__init__()

        sizes = (in_channels,) + tuple(widths)
        self.blocks = nn.ModuleList(ConvLayer(a, b, stride=2) for a, b in zip(sizes[:-1], sizes[1:]))

    def features(self, x: torch.Tensor) -> list[torch.Tensor]:
        feats = []
        for block in self.blocks:
            x = pointwise(block(x), Activation.Relu)
            feats.append(x)

        return feats


class Discriminator(ConvTrunk):
    def __init__(self, widths: tuple[int, ...] = DISCRIMINATOR_WIDTHS):
        super().__init__(widths)
        self.head = LinearLayer(widths[-1], 1)

    def forward(self, x: torch.Tensor) -> tuple[torch.Tensor, list[torch.Tensor]]:
        feats = self.features(x)
        return self.head(global_average_pool(feats[-1]))[..., 0], feats


class Encoder(ConvTrunk):
    def __init__(self, embedding_width: int, widths: tuple[int, ...] = ENCODER_WIDTHS):
        super().__init__(widths)
        self.head = LinearLayer(widths[-1], embedding_width)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(global_average_pool(self.features(x)[-1]))


# Mirror of the encoder used only to pretrain the HQ encoder as an autoencoder
class Decoder(nn.Module):
    seed_size: int

    def __init__(self, config: GeneratorConfig, widths: tuple[int, ...] = ENCODER_WIDTHS):
        super().__init__()

        self.seed_size = config.resolution // 2 ** len(widths)
        self.seed_channels = widths[-1]
        self.project = LinearLayer(config.embedding_width, widths[-1] * self.seed_size ** 2)

        sizes = tuple(reversed(widths)) + (widths[0],)
        self.blocks = nn.ModuleList(ConvLayer(a, b) for a, b in zip(sizes[:-1], sizes[1:]))
        self.to_rgb = ConvLayer(widths[0], 3)

    def forward(self, v: torch.Tensor) -> torch.Tensor:
        x = pointwise(self.project(v), Activation.Relu)
        x = x.reshape(*v.shape[:-1], self.seed_channels, self.seed_size, self.seed_size)

        for block in self.blocks:
            x = pointwise(block(upsample(x, 2, Resample.Bilinear)), Activation.Relu)

        return pointwise(self.to_rgb(x), Activation.Sigmoid)


# FC(relu(FC(v))) mapping an embedding to the 2C statistics of one scale
class FCHead(nn.Module):
    def __init__(self, embedding_width: int, channels: int, hidden: int = None):
        super().__init__()

        hidden = hidden or embedding_width
        self.first = LinearLayer(embedding_width, hidden)
        self.second = LinearLayer(hidden, 2 * channels)

    def forward(self, v: torch.Tensor) -> torch.Tensor:
        return self.second(pointwise(self.first(v), Activation.Relu))
