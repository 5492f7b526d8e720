"""Deterministic, splittable random streams for experiments.

Child seeds are derived by hashing the parent seed together with a
path of labels, so independent stages of a run (per-trial sampling,
per-matrix draws) get independent streams and reordering one stage
never shifts another.  SHA-256 and the Mersenne generator behind
random.Random are stable across platforms and Python versions, which
keeps reports byte-identical for a fixed seed.
"""

from __future__ import annotations

import hashlib
import random


def child_seed(seed, *path):
    """A 64-bit seed derived from a parent seed and a label path."""
    h = hashlib.sha256()
    h.update(repr(seed).encode())
    for part in path:
        h.update(b"/")
        h.update(repr(part).encode())
    return int.from_bytes(h.digest()[:8], "big")


def rng_for(seed, *path):
    """A private random.Random for one labeled stage of a run."""
    return random.Random(child_seed(seed, *path))
