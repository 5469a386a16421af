"""Reproducible counter-based random streams.

Each (seed, index) pair keys an independent Philox stream, so replicate
results are bit-identical no matter how work is scheduled across workers.
Normal draws go through the inverse CDF applied to uniforms, keeping the
streams portable across platforms and numpy versions.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

__all__ = ["substream", "standard_normal", "rademacher"]

_MASK64 = (1 << 64) - 1


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator keyed by (seed, index)."""
    key = np.array([int(seed) & _MASK64, int(index) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def standard_normal(gen: np.random.Generator, size) -> np.ndarray:
    """N(0,1) draws by inverse-CDF transform of uniforms."""
    u = gen.random(size)
    # keep ndtri away from 0/1 endpoints
    u = np.clip(u, 1e-300, 1.0 - 1e-16)
    return ndtri(u)


def rademacher(gen: np.random.Generator, size) -> np.ndarray:
    return np.where(gen.random(size) < 0.5, -1.0, 1.0)
