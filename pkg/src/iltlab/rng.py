"""Counter-based, splittable random streams.

A stream is a value: ``(master_seed, replicate_index, path)``.  Every call to
:meth:`RngStream.generator` returns a fresh Philox generator positioned at
counter zero, so a replicate produces the same draws no matter which worker
evaluates it or in which order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    replicate_index: int = 0
    path: tuple[int, ...] = ()

    def __post_init__(self):
        for v in (self.master_seed, self.replicate_index, *self.path):
            if int(v) != v or v < 0 or v > _MASK64:
                raise ValueError(f"stream coordinates must be 64-bit unsigned integers, got {v!r}")

    @property
    def key(self) -> np.ndarray:
        """128-bit Philox key hashed from the stream coordinates."""
        entropy = [self.master_seed, self.replicate_index, len(self.path), *self.path]
        return np.random.SeedSequence(entropy).generate_state(2, np.uint64)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key))

    def child(self, index: int) -> "RngStream":
        """Independent sub-stream; children with different indices never overlap."""
        return RngStream(self.master_seed, self.replicate_index, self.path + (int(index),))


def derive_stream(master_seed: int, replicate_index: int) -> RngStream:
    return RngStream(int(master_seed), int(replicate_index))
