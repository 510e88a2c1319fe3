"""Shared golden fixtures: small matrices with known structure."""

import numpy as np
import pytest

from switchgraph import BinaryMatrix

# 3x3 pair two positive switches apart (two distinct shortest paths).
PAIR_3X3_A = [[0, 0, 1], [1, 0, 0], [1, 1, 0]]
PAIR_3X3_B = [[1, 0, 0], [0, 1, 0], [1, 0, 1]]
PAIR_3X3_PATHS = (
    ((1, 2, 1, 3), (2, 3, 2, 3)),
    ((1, 3, 2, 3), (1, 2, 1, 2)),
)

# 4x4 pair whose decomposition grid is a ring with a hole: not reachable.
RING_A = [[0, 0, 0, 1], [1, 1, 0, 1], [1, 0, 1, 1], [1, 0, 0, 0]]
RING_B = [[1, 0, 0, 0], [1, 0, 1, 1], [1, 1, 0, 1], [0, 0, 0, 1]]
RING_T = [[1, 1, 1], [1, 0, 1], [1, 1, 1]]

# 4x4 block swap: reachable, needs at least four switches, and the grid
# has a steep peak (adjacent coefficients differ by more than 1).
BLOCK_A = [[0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 0], [1, 1, 0, 0]]
BLOCK_B = [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1]]
BLOCK_T = [[1, 2, 1], [2, 4, 2], [1, 2, 1]]

# 6x6 zebra menagerie: banded zebra (not split), horizontally split zebra,
# and their anti-zebra counterparts (complement of the vertical reflection).
ZEBRA_BANDED = [
    [1, 1, 1, 1, 1, 0],
    [1, 1, 1, 1, 0, 0],
    [1, 1, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 1, 1],
    [0, 0, 1, 1, 1, 1],
]
ZEBRA_SPLIT_H = [
    [1, 1, 1, 1, 1, 0],
    [1, 1, 1, 1, 0, 0],
    [1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 1],
    [0, 0, 1, 1, 1, 1],
]
ANTI_BANDED = [
    [1, 1, 0, 0, 0, 0],
    [0, 1, 1, 1, 0, 0],
    [0, 1, 1, 1, 1, 0],
    [0, 0, 1, 1, 1, 0],
    [0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 1],
]
ANTI_SPLIT_H = [
    [1, 1, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0],
    [1, 1, 1, 1, 1, 0],
    [0, 0, 1, 1, 1, 1],
    [0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 1],
]


@pytest.fixture
def pair_3x3():
    return BinaryMatrix(PAIR_3X3_A), BinaryMatrix(PAIR_3X3_B)


@pytest.fixture
def ring_pair():
    return BinaryMatrix(RING_A), BinaryMatrix(RING_B)


@pytest.fixture
def block_pair():
    return BinaryMatrix(BLOCK_A), BinaryMatrix(BLOCK_B)


def random_binary(rng: np.random.Generator, p: int, q: int, density=0.5) -> BinaryMatrix:
    return BinaryMatrix((rng.random((p, q)) < density).astype(int))
