from typing import BinaryIO

import torch

from da_sfft.api import logger
from da_sfft.api.errors import StateError
from da_sfft.api.networks.config import AblationMode, GeneratorConfig
from da_sfft.api.networks.state import FLAGS, ModelState
from da_sfft.api.tensor.ops import DTYPE
from da_sfft.api.tensor.repository import MAGIC, read_tensor, write_tensor

HEADER = "DASFFT-MODEL v1"

_BYTES_PER_VALUE = 8


def _dims(shape) -> str:
    return "x".join(str(d) for d in shape) if len(shape) else "scalar"


def _parse_dims(text: str) -> tuple[int, ...]:
    return () if text == "scalar" else tuple(int(d) for d in text.split("x"))


# Model file: header, meta lines, one entry line per tensor (name, shape, byte offset), then one TENS blob
class ModelStateRepository:
    def save(self, path: str, state: ModelState):
        with open(path, "wb") as stream:
            self.write(stream, state)

        logger.info("Saved model state to " + path)

    def load(self, path: str) -> ModelState:
        try:
            with open(path, "rb") as stream:
                return self.read(stream)
        except FileNotFoundError:
            raise StateError("Model file not found: " + path)

    def write(self, stream: BinaryIO, state: ModelState):
        state.require_initialized()
        config = state.config

        lines = [
            HEADER,
            "meta resolution " + str(config.resolution),
            "meta channels " + ",".join(str(c) for c in config.channels),
            "meta base_channels " + str(config.base_channels),
            "meta hidden_width " + str(config.hidden_width),
            "meta embedding_width " + str(config.embedding_width),
            "meta mode " + state.mode.value,
        ]
        lines += ["meta flag." + flag + " " + str(state.flags[flag]) for flag in FLAGS]
        lines += ["meta lr." + group + " " + repr(optimizer.learning_rate)
                  for group, optimizer in sorted(state.optimizers.items())]

        tensors = state.export_tensors()
        offset = 0
        chunks = []

        for name, value in tensors.items():
            lines.append("entry " + name + " " + _dims(value.shape) + " " + str(offset))
            chunks.append(value.detach().to(DTYPE).reshape(-1))
            offset += value.numel() * _BYTES_PER_VALUE

        stream.write(("\n".join(lines) + "\n").encode("ascii"))
        write_tensor(stream, torch.cat(chunks) if chunks else torch.zeros(1, dtype=DTYPE))

    def read(self, stream: BinaryIO) -> ModelState:
        if stream.readline().decode("ascii").strip() != HEADER:
            raise StateError("Not a " + HEADER + " model file")

        meta = {}
        entries = []

        while True:
            position = stream.tell()
            line = stream.readline().decode("ascii")

            if not line:
                raise StateError("Model file has no tensor blob")

            if line.startswith(MAGIC):
                stream.seek(position)
                break

            fields = line.split()
            match fields[0]:
                case "meta":
                    meta[fields[1]] = fields[2]
                case "entry":
                    entries.append((fields[1], _parse_dims(fields[2]), int(fields[3])))
                case _:
                    raise StateError("Unexpected model file line: " + line.strip())

        blob = read_tensor(stream)

        try:
            config = GeneratorConfig(int(meta["resolution"]), tuple(int(c) for c in meta["channels"].split(",")),
                                     int(meta["base_channels"]), int(meta["hidden_width"]),
                                     int(meta["embedding_width"]))
            state = ModelState(config, AblationMode.parse(meta["mode"]))
        except KeyError as e:
            raise StateError("Model file lacks meta field " + str(e))

        tensors = {}
        for name, shape, offset in entries:
            start = offset // _BYTES_PER_VALUE
            count = 1
            for d in shape:
                count *= d
            tensors[name] = blob[start:start + count].reshape(shape).clone()

        for flag in FLAGS:
            state.flags[flag] = int(meta.get("flag." + flag, "0"))

        learning_rates = {key[len("lr."):]: float(value) for key, value in meta.items() if key.startswith("lr.")}
        state.restore_tensors(tensors, learning_rates)

        return state
