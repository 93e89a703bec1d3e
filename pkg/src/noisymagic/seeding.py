"""Deterministic, counter-based randomness.

No global RNG state anywhere in the package: every stochastic routine takes
an explicit 64-bit seed, and ensemble members derive their seeds by hashing
(master_seed, index) so results never depend on scheduling order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master_seed: int, index: int) -> int:
    """Stable 64-bit seed for ensemble member `index` under `master_seed`."""
    payload = b"%d:%d" % (master_seed, index)
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "little")


def make_generator(seed: int) -> np.random.Generator:
    """Counter-based Philox generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & (2**64 - 1)))
