"""Reproducible gaussian streams.

Uniforms come from numpy's PCG64 bit generator (``random_raw``), whose
output is specified bit-for-bit, and are turned into normals with the
Box-Muller transform.  This avoids depending on numpy's internal normal
sampler, so recorded noise is identical across numpy versions and platforms.
"""
from __future__ import annotations

import numpy as np

_INV_2_53 = 1.0 / 9007199254740992.0


class GaussianStream:
    """Seeded standard-normal generator (PCG64 + Box-Muller)."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._bits = np.random.PCG64(self.seed)

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles in ``[0, 1)`` from the top 53 bits of each raw draw."""
        raw = self._bits.random_raw(n)
        return (raw >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def normal(self, size=None, std: float = 1.0) -> np.ndarray | float:
        shape = () if size is None else (size if isinstance(size, tuple) else (size,))
        n = int(np.prod(shape, dtype=np.int64))
        m = (n + 1) // 2
        u = self.uniform(2 * m)
        u1 = 1.0 - u[0::2]  # in (0, 1], keeps the log finite
        u2 = u[1::2]
        rad = np.sqrt(-2.0 * np.log(u1))
        ang = 2.0 * np.pi * u2
        z = np.empty(2 * m)
        z[0::2] = rad * np.cos(ang)
        z[1::2] = rad * np.sin(ang)
        out = std * z[:n].reshape(shape)
        return float(out) if size is None else out


def substream_seed(seed: int, index: int) -> int:
    """Independent child seed for parallel runs (SeedSequence spawning)."""
    child = np.random.SeedSequence(int(seed)).spawn(index + 1)[index]
    return int(child.generate_state(1, dtype=np.uint64)[0])
