"""Named random substreams derived from a single root seed."""

import zlib

import numpy as np

STREAMS = ("generator", "evolution", "probing", "training", "assignment", "responses", "rewiring", "detection", "factions")


def substream(seed, name):
    """Return an independent ``numpy.random.Generator`` for stage ``name``.

    The same (seed, name) always yields the same stream, so any stage can be
    re-run in isolation.
    """
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), key]))


def child_seeds(rng, count):
    """Draw ``count`` integer seeds from ``rng`` for nested deterministic work."""
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=count, dtype=np.int64)]
