"""Reproducible random streams.

Every random quantity in the package is drawn from ``philox4x64-v1``: the
Philox 4x64 counter-based generator (10 rounds) as shipped by numpy, keyed by
the pair ``(seed, stream_id)`` with the counter starting at zero.  A port to
another language reproduces a stream by instantiating Philox4x64-10 with the
same 128-bit key and consuming 64-bit outputs in order; the conversions to
floats and integers follow numpy's ``Generator`` methods.
"""

from __future__ import annotations

import numpy as np

PRNG_NAME = "philox4x64-v1"

MASK64 = (1 << 64) - 1


def make_rng(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Generator for the stream ``stream_id`` of ``seed``; independent across streams."""
    key = np.array([int(seed) & MASK64, int(stream_id) & MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
