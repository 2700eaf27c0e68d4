"""Deterministic seed derivation.

Every random routine takes a ``seed`` that may be an int, a SeedSequence, or
a (entropy, path) record produced by ``seed_record``. Child streams for run r
and trace k derive from the master seed via spawn keys, so any single run can
be replayed in isolation without re-running its predecessors.
"""

from __future__ import annotations

import numpy as np


def as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, tuple):
        entropy, path = seed
        return np.random.SeedSequence(entropy=entropy, spawn_key=tuple(path))
    return np.random.SeedSequence(entropy=seed)


def child_seed(seed, *path: int) -> np.random.SeedSequence:
    """Seed for a numbered child stream, independent of sibling order."""
    base = as_seed_sequence(seed)
    entropy = base.entropy
    key = tuple(base.spawn_key) + tuple(int(p) for p in path)
    return np.random.SeedSequence(entropy=entropy, spawn_key=key)


def derive_rng(seed, *path: int) -> np.random.Generator:
    if path:
        seed = child_seed(seed, *path)
    return np.random.default_rng(as_seed_sequence(seed))


def seed_record(seed) -> tuple:
    """Compact (entropy, path) tuple stored on traces and in reports."""
    ss = as_seed_sequence(seed)
    return (ss.entropy, tuple(int(k) for k in ss.spawn_key))
