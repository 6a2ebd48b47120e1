import os
from typing import Callable, Mapping, Optional

from da_sfft.api.errors import ConfigError
from da_sfft.api.losses.report import LossWeights
from da_sfft.api.networks.config import DEFAULT_CHANNELS, AblationMode, GeneratorConfig

SEED_ENVIRONMENT = "DASFFT_SEED"


def _parse_int(text: str) -> int:
    return int(text.strip())


def _parse_float(text: str) -> float:
    return float(text.strip())


def _parse_str(text: str) -> str:
    return text.strip()


def _parse_channels(text: str) -> tuple[int, ...]:
    return tuple(int(c) for c in text.replace(" ", "").split(",") if c)


def _render(value) -> str:
    if isinstance(value, AblationMode):
        return value.value
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)

    return str(value)


class RunConfig:
    # Master seed of every random stream
    master_seed: int = 0

    # Image side length R
    resolution: int = 64

    # Corpus sizes
    train_size: int = 200
    test_size: int = 50

    # Iteration counts per stage
    pretrain_steps: int = 1000
    dafe_steps: int = 2000
    gan_steps: int = 2000

    # Adam learning rates
    generator_lr: float = 0.0001
    discriminator_lr: float = 0.0004
    encoder_lr: float = 0.001

    batch_size: int = 4

    # Generator objective weights
    lambda_s: float = 1.0
    lambda_rec: float = 10.0
    lambda_g: float = 0.1

    # Rain layer count range of the degradation model
    m_min: int = 1
    m_max: int = 3

    ablation: AblationMode = AblationMode.SfftDafe

    channels: tuple[int, ...] = DEFAULT_CHANNELS
    embedding_width: int = 64
    hidden_width: int = 16

    # Steps between progress log lines
    log_interval: int = 100

    # torch intra-op threads
    threads: int = 1

    work_dir: str = "work"

    # Empty paths resolve inside work_dir
    model_path: str = ""
    log_csv: str = ""
    log_file: str = ""

    _PARSERS: dict[str, Callable] = {
        "master_seed": _parse_int,
        "resolution": _parse_int,
        "train_size": _parse_int,
        "test_size": _parse_int,
        "pretrain_steps": _parse_int,
        "dafe_steps": _parse_int,
        "gan_steps": _parse_int,
        "generator_lr": _parse_float,
        "discriminator_lr": _parse_float,
        "encoder_lr": _parse_float,
        "batch_size": _parse_int,
        "lambda_s": _parse_float,
        "lambda_rec": _parse_float,
        "lambda_g": _parse_float,
        "m_min": _parse_int,
        "m_max": _parse_int,
        "ablation": AblationMode.parse,
        "channels": _parse_channels,
        "embedding_width": _parse_int,
        "hidden_width": _parse_int,
        "log_interval": _parse_int,
        "threads": _parse_int,
        "work_dir": _parse_str,
        "model_path": _parse_str,
        "log_csv": _parse_str,
        "log_file": _parse_str,
    }

    # Counts that may be zero
    _ZERO_ALLOWED = ("pretrain_steps", "dafe_steps", "gan_steps", "m_min", "m_max")

    def __init__(self, **values):
        for key, value in values.items():
            self.set(key, value)

    @staticmethod
    def fields() -> list[str]:
        return list(RunConfig._PARSERS.keys())

    def set(self, key: str, value):
        if key not in RunConfig._PARSERS:
            raise ConfigError("Unknown configuration key " + key)

        if isinstance(value, str):
            try:
                value = RunConfig._PARSERS[key](value)
            except ValueError as e:
                raise ConfigError("Cannot parse " + key + " = " + value + ": " + str(e))
        elif key == "channels":
            value = tuple(int(c) for c in value)

        setattr(self, key, value)

    @staticmethod
    def loads(text: str) -> "RunConfig":
        config = RunConfig()

        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue

            if "=" not in line:
                raise ConfigError("Line " + str(number) + " is not key = value: " + line)

            key, value = line.split("=", 1)
            config.set(key.strip(), value.strip())

        return config

    @staticmethod
    def load(path: str) -> "RunConfig":
        try:
            with open(path) as stream:
                return RunConfig.loads(stream.read())
        except FileNotFoundError:
            raise ConfigError("Configuration file not found: " + path)

    def dump(self) -> str:
        return "".join(key + " = " + _render(getattr(self, key)) + "\n" for key in RunConfig.fields())

    def save(self, path: str):
        with open(path, "w") as stream:
            stream.write(self.dump())

    # New config with the given fields replaced; None values are skipped
    def with_overrides(self, overrides: Mapping[str, Optional[object]]) -> "RunConfig":
        config = RunConfig.loads(self.dump())

        for key, value in overrides.items():
            if value is not None:
                config.set(key, value)

        return config

    def with_environment(self, environ: Mapping[str, str] = os.environ) -> "RunConfig":
        if environ.get(SEED_ENVIRONMENT):
            return self.with_overrides({"master_seed": environ[SEED_ENVIRONMENT]})

        return self

    def validate(self) -> "RunConfig":
        for key, parser in RunConfig._PARSERS.items():
            if parser is _parse_int and key != "master_seed":
                value = getattr(self, key)
                if value < 0 or (value == 0 and key not in RunConfig._ZERO_ALLOWED):
                    raise ConfigError(key + " must be positive, got " + str(value))

        if not 0 <= self.master_seed < 1 << 64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")

        if self.m_min > self.m_max:
            raise ConfigError("m_min must not exceed m_max")

        for key in ("generator_lr", "discriminator_lr", "encoder_lr"):
            if not getattr(self, key) > 0:
                raise ConfigError(key + " must be positive")

        self.loss_weights()
        self.generator_config()

        return self

    def generator_config(self) -> GeneratorConfig:
        return GeneratorConfig(self.resolution, self.channels, hidden_width=self.hidden_width,
                               embedding_width=self.embedding_width)

    def loss_weights(self) -> LossWeights:
        try:
            return LossWeights(self.lambda_s, self.lambda_rec, self.lambda_g)
        except ValueError as e:
            raise ConfigError(str(e))

    @property
    def m_range(self) -> tuple[int, int]:
        return self.m_min, self.m_max

    def model_file(self) -> str:
        return self.model_path or os.path.join(self.work_dir, "model.dasfft")

    def log_csv_file(self) -> str:
        return self.log_csv or os.path.join(self.work_dir, "train_log.csv")
