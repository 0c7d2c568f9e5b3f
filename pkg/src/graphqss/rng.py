"""Seeding: one master seed, independent numpy streams per round."""

from __future__ import annotations

import os

import numpy as np

DEFAULT_SEED = 1234
SEED_ENV = "GRAPHQSS_SEED"

# spawn key for the check-sample draw, outside the range of round indices
CHECK_STREAM = 1 << 32


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def stream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the sub-stream ``key`` of ``seed``; identical regardless of call order."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=key)))


def round_rng(seed: int, r: int) -> np.random.Generator:
    return stream(seed, r)
