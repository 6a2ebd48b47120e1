import hashlib

import numpy as np
import torch

SEED_LIMIT = 1 << 64


def _name_key(name: str) -> int:
    return int.from_bytes(hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest(), "little")


# Named, counter-based random substreams of one master seed.
# A substream only depends on (master seed, names), so adding a new consumer never shifts the others.
class SeedStream:
    master_seed: int

    def __init__(self, master_seed: int):
        if not 0 <= int(master_seed) < SEED_LIMIT:
            raise ValueError("Master seed must be a 64-bit unsigned integer, got " + str(master_seed))

        self.master_seed = int(master_seed)

    def _sequence(self, names: tuple) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=self.master_seed, spawn_key=tuple(_name_key(str(n)) for n in names))

    def generator(self, *names) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self._sequence(names)))

    # Derived 64-bit seed of the given substream
    def seed(self, *names) -> int:
        return int(self._sequence(names).generate_state(1, np.uint64)[0])

    def child(self, *names) -> "SeedStream":
        return SeedStream(self.seed(*names))

    def normal(self, shape, *names, mean: float = 0.0, std: float = 1.0) -> torch.Tensor:
        return torch.from_numpy(self.generator(*names).normal(mean, std, size=tuple(shape)))

    def uniform(self, shape, *names, low: float = 0.0, high: float = 1.0) -> torch.Tensor:
        return torch.from_numpy(self.generator(*names).uniform(low, high, size=tuple(shape)))
