import hashlib
from typing import Optional

import torch
from torch import nn

from da_sfft.api.errors import FrozenParameterError, StateError
from da_sfft.api.networks.config import AblationMode, GeneratorConfig
from da_sfft.api.networks.modules import DISCRIMINATOR_SCALES, Decoder, Discriminator, Encoder, FCHead, Generator
from da_sfft.api.tensor.modules import initialize, set_frozen
from da_sfft.api.tensor.optimizer import AdamState
from da_sfft.api.utils.seeding import SeedStream

SUBNETWORKS = ("generator", "discriminators", "hq_encoder", "hq_decoder", "lq_encoder", "fc_heads")

# Optimizer group => subnetworks it updates
OPTIMIZER_GROUPS = {
    "autoencoder": ("hq_encoder", "hq_decoder"),
    "lq_encoder": ("lq_encoder",),
    "generator": ("generator", "fc_heads"),
    "discriminator": ("discriminators",),
}

PRETRAINED_FLAG = "hq_encoder_pretrained"
ALIGNED_FLAG = "lq_encoder_aligned"
GAN_STEPS_FLAG = "gan_steps"
FLAGS = (PRETRAINED_FLAG, ALIGNED_FLAG, GAN_STEPS_FLAG)

OPTIMIZER_PREFIX = "optim."


class ModelState(nn.Module):
    config: GeneratorConfig
    mode: AblationMode

    # Stage bookkeeping, persisted as model file meta lines
    flags: dict[str, int]

    # Optimizer group => Adam state, created by the training stages
    optimizers: dict[str, AdamState]

    initialized: bool

    def __init__(self, config: GeneratorConfig, mode: AblationMode):
        super().__init__()

        self.config = config
        self.mode = mode
        self.flags = {flag: 0 for flag in FLAGS}
        self.optimizers = {}
        self.initialized = False

        self.generator = Generator(config, mode.components)
        self.discriminators = nn.ModuleList(Discriminator() for _ in DISCRIMINATOR_SCALES)
        self.hq_encoder = Encoder(config.embedding_width)
        self.hq_decoder = Decoder(config)

        if mode.uses_dafe:
            self.lq_encoder = Encoder(config.embedding_width)
            self.fc_heads = nn.ModuleList(FCHead(config.embedding_width, c) for c in config.channels)
        else:
            self.lq_encoder = None
            self.fc_heads = None

    @staticmethod
    def create(config: GeneratorConfig, mode: AblationMode, seed: int) -> "ModelState":
        state = ModelState(config, mode)
        state.initialize(SeedStream(seed))
        return state

    def initialize(self, stream: SeedStream):
        for name in self.present_subnetworks():
            initialize(self.subnetwork(name), stream, name + ".")

        with torch.no_grad():
            self.generator.start.copy_(stream.normal(self.generator.start.shape, "init", "generator.start"))

        self.initialized = True

    def present_subnetworks(self) -> list[str]:
        return [name for name in SUBNETWORKS if getattr(self, name) is not None]

    def subnetwork(self, name: str) -> nn.Module:
        if name not in SUBNETWORKS:
            raise ValueError("Unknown subnetwork " + name)

        module = getattr(self, name)
        if module is None:
            raise StateError("Subnetwork " + name + " is not part of the " + self.mode.value + " configuration")

        return module

    # Owning subnetwork of a parameter or buffer name
    @staticmethod
    def owner(name: str) -> str:
        return name.split(".", 1)[0]

    def require_initialized(self):
        if not self.initialized:
            raise StateError("Model state is not initialized")

    def group_parameters(self, group: str) -> list[nn.Parameter]:
        params = []
        for name in OPTIMIZER_GROUPS[group]:
            if getattr(self, name) is not None:
                params.extend(self.subnetwork(name).parameters())

        return params

    def optimizer(self, group: str, learning_rate: float) -> AdamState:
        if group not in self.optimizers:
            self.optimizers[group] = AdamState(self.group_parameters(group), learning_rate)

        return self.optimizers[group]

    def parameter_names(self) -> dict[int, str]:
        return {id(param): name for name, param in self.named_parameters()}

    def freeze(self, name: str):
        set_frozen(self.subnetwork(name), True)

    def thaw(self, name: str):
        set_frozen(self.subnetwork(name), False)

    def apply_freezing(self):
        if self.flags[PRETRAINED_FLAG]:
            self.freeze("hq_encoder")
            self.freeze("hq_decoder")

        if self.flags[ALIGNED_FLAG] and self.lq_encoder is not None:
            self.freeze("lq_encoder")

    def release_optimizer(self, group: str):
        self.optimizers.pop(group, None)

    # Digest of every tensor owned by the subnetwork, for bit-exact freeze checks
    def fingerprint(self, name: str) -> str:
        digest = hashlib.sha256()

        for key, value in sorted(self.subnetwork(name).state_dict().items()):
            digest.update(key.encode("utf-8"))
            digest.update(value.detach().contiguous().numpy().tobytes())

        return digest.hexdigest()

    def check_frozen(self, name: str, fingerprint: Optional[str] = None):
        module = self.subnetwork(name)

        if any(param.requires_grad for param in module.parameters()):
            raise FrozenParameterError("Subnetwork " + name + " must be frozen")

        registered = {id(p) for optimizer in self.optimizers.values() for p in optimizer.params}
        if any(id(param) in registered for param in module.parameters()):
            raise FrozenParameterError("Subnetwork " + name + " is registered with an optimizer")

        if fingerprint is not None and self.fingerprint(name) != fingerprint:
            raise FrozenParameterError("Frozen subnetwork " + name + " changed")

    # Parameters, buffers and optimizer moments under flat names
    def export_tensors(self) -> dict[str, torch.Tensor]:
        tensors = {name: value.detach().clone() for name, value in self.state_dict().items()}
        names = self.parameter_names()

        for group, optimizer in sorted(self.optimizers.items()):
            for key, value in optimizer.export(names).items():
                tensors[OPTIMIZER_PREFIX + group + "." + key] = value

        return tensors

    def restore_tensors(self, tensors: dict[str, torch.Tensor], learning_rates: dict[str, float]):
        weights = {k: v for k, v in tensors.items() if not k.startswith(OPTIMIZER_PREFIX)}
        expected = set(self.state_dict().keys())

        if set(weights.keys()) != expected:
            missing = sorted(expected - set(weights.keys()))
            unexpected = sorted(set(weights.keys()) - expected)
            raise StateError("Model file does not match the configuration, missing " + str(missing[:5])
                             + ", unexpected " + str(unexpected[:5]))

        with torch.no_grad():
            for name, value in self.state_dict().items():
                value.copy_(weights[name].reshape(value.shape))

        names = self.parameter_names()
        for group, learning_rate in sorted(learning_rates.items()):
            prefix = OPTIMIZER_PREFIX + group + "."
            moments = {k[len(prefix):]: v for k, v in tensors.items() if k.startswith(prefix)}
            self.optimizer(group, learning_rate).restore(names, moments)

        self.initialized = True
        self.apply_freezing()
