import random

import pytest

from twistalg.groups import mat, mmul


@pytest.fixture
def rng():
    return random.Random(20240817)


def random_unimodular(rng, size: int = 2, words: int = 6):
    """A random product of elementary shear matrices (determinant 1)."""
    from twistalg.groups import identity_mat
    m = identity_mat(size)
    for _ in range(words):
        i, j = rng.sample(range(size), 2)
        c = rng.randint(-3, 3)
        e = [[1 if r == s else 0 for s in range(size)] for r in range(size)]
        e[i][j] = c
        m = mmul(m, mat(e))
    return m


def random_lambda(rng, group, order: int):
    from twistalg.scalars import RootUnity
    return {g: RootUnity.of(rng.randrange(order), order) for g in group.elements}
