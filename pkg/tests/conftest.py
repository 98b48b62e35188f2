import random

import pytest

from strongtree import Universe, enum_strong_subtrees


@pytest.fixture(scope="session")
def u23():
    return Universe.full(2, 3)


@pytest.fixture(scope="session")
def u24():
    return Universe.full(2, 4)


def all_subtrees(U):
    return [X for n in range(1, U.height + 1) for X in enum_strong_subtrees(U, n)]


def sample(seq, k, seed=0):
    seq = list(seq)
    if len(seq) <= k:
        return seq
    return random.Random(seed).sample(seq, k)
