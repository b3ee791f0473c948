"""Shared fixtures: deterministic random traces and hand-checked trace pairs."""

from __future__ import annotations

import random

import pytest

import locmetrics as lm

# Two different traces whose reuse-time AND reuse-distance histograms agree,
# demonstrating that neither histogram determines the trace. Hand-checked:
# rt = (inf, inf, 2, 2, 1, 3) vs (inf, inf, 1, 3, 2, 2), both {1:1, 2:2, 3:1};
# rd = (inf, inf, 2, 2, 1, 2) vs (inf, inf, 1, 2, 2, 2), both {1:1, 2:3}.
PAIR_SAME_BOTH_HISTS = ((1, 2, 1, 2, 2, 1), (1, 2, 2, 1, 2, 1))

# Equal reuse-time histograms but different reuse-distance histograms.
PAIR_SAME_RT_HIST = (
    (1, 2, 3, 4, 3, 4, 1, 2, 3, 4, 3, 2, 3, 2, 3, 4, 3, 2, 1),
    (1, 2, 3, 4, 3, 2, 1, 2, 3, 4, 3, 2, 3, 4, 3, 4, 3, 2, 1),
)

# Equal reuse-distance histograms but different reuse-time sequences.
PAIR_SAME_RD_HIST = (
    (1, 2, 3, 4, 3, 4, 1, 2, 3, 4, 3, 2, 1),
    (1, 2, 3, 4, 3, 4, 2, 1, 3, 4, 3, 2, 1),
)


def make_random_trace(rng: random.Random, n_max: int = 60, m_max: int = 8) -> lm.Trace:
    """Random trace with n in [0, n_max] drawn over at most m_max data."""
    n = rng.randrange(0, n_max + 1)
    m = rng.randrange(1, m_max + 1)
    return lm.Trace.from_ids(rng.randrange(1, m + 1) for _ in range(n))


def make_sealed_trace(
    rng: random.Random, mid_max: int = 60, m_max: int = 8
) -> lm.Trace:
    """Random sealed trace: permutation head and tail around a random middle."""
    m = rng.randrange(1, m_max + 1)
    head = list(range(1, m + 1))
    tail = list(range(1, m + 1))
    rng.shuffle(head)
    rng.shuffle(tail)
    mid = [rng.randrange(1, m + 1) for _ in range(rng.randrange(0, mid_max))]
    return lm.Trace.from_ids(head + mid + tail)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260823)
