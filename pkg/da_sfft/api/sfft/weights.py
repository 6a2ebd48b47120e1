from torch import nn

from da_sfft.api.tensor.modules import ConvLayer
from da_sfft.api.tensor.ops import Activation, global_average_pool, pointwise

SFF_DEPTH = 3
ATTENTION_DEPTH = 2

# Image crop channels plus the one-hot parsing crop
CROP_CHANNELS = 4


# ψ_SFF: conv-relu blocks, a conv to 2C channels and a global average pool
class SFFStack(nn.Module):
    def __init__(self, in_channels: int, channels: int, hidden: int, depth: int = SFF_DEPTH):
        super().__init__()

        widths = [in_channels] + [hidden] * depth
        self.blocks = nn.ModuleList(ConvLayer(a, b) for a, b in zip(widths[:-1], widths[1:]))
        self.head = ConvLayer(hidden, 2 * channels)

    def forward(self, x):
        for block in self.blocks:
            x = pointwise(block(x), Activation.Relu)

        return global_average_pool(self.head(x))


class AttentionStack(nn.Module):
    def __init__(self, components: int, channels: int, hidden: int, depth: int = ATTENTION_DEPTH):
        super().__init__()

        widths = [components * channels] + [hidden] * depth
        self.blocks = nn.ModuleList(ConvLayer(a, b) for a, b in zip(widths[:-1], widths[1:]))
        self.head = ConvLayer(hidden, components)

    # Returns pre-sigmoid logits, one channel per component
    def forward(self, x):
        for block in self.blocks:
            x = pointwise(block(x), Activation.Relu)

        return self.head(x)


# Every parameter of one SFFT scale level
class SFFTWeights(nn.Module):
    channels: int
    components: int

    def __init__(self, in_channels: int, channels: int, components: int, hidden: int):
        super().__init__()

        self.channels = channels
        self.components = components

        self.refine = ConvLayer(in_channels, channels)
        self.component_stacks = nn.ModuleList(SFFStack(CROP_CHANNELS, channels, hidden) for _ in range(components))
        self.attention = AttentionStack(components, channels, hidden)
        self.fusion = SFFStack(channels, channels, hidden)
