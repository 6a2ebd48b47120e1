from typing import BinaryIO

import numpy as np
import torch

from da_sfft.api.tensor.ops import DTYPE

MAGIC = "TENS"
VERSION = "v1"

_LITTLE_ENDIAN_F64 = np.dtype("<f8")


def write_tensor(stream: BinaryIO, value: torch.Tensor):
    shape = list(value.shape)
    header = " ".join([MAGIC, VERSION, str(len(shape))] + [str(d) for d in shape]) + "\n"

    stream.write(header.encode("ascii"))
    stream.write(value.detach().to(DTYPE).contiguous().numpy().astype(_LITTLE_ENDIAN_F64).tobytes())


def read_tensor(stream: BinaryIO) -> torch.Tensor:
    fields = stream.readline().decode("ascii").split()

    if len(fields) < 3 or fields[0] != MAGIC or fields[1] != VERSION:
        raise ValueError("Not a " + MAGIC + " " + VERSION + " stream: " + " ".join(fields[:3]))

    ndim = int(fields[2])
    shape = [int(d) for d in fields[3:3 + ndim]]

    if len(shape) != ndim or any(d < 1 for d in shape):
        raise ValueError("Malformed tensor header: " + " ".join(fields))

    count = int(np.prod(shape)) if shape else 1
    raw = stream.read(count * _LITTLE_ENDIAN_F64.itemsize)

    if len(raw) != count * _LITTLE_ENDIAN_F64.itemsize:
        raise ValueError("Tensor payload truncated, expected " + str(count) + " values")

    values = np.frombuffer(raw, dtype=_LITTLE_ENDIAN_F64).astype(np.float64)
    return torch.from_numpy(values.copy()).reshape(shape)


class TensorRepository:
    def save(self, path: str, value: torch.Tensor):
        with open(path, "wb") as stream:
            write_tensor(stream, value)

    def load(self, path: str) -> torch.Tensor:
        with open(path, "rb") as stream:
            return read_tensor(stream)
