import random

import pytest

from torusgit.lattice import IntMatrix
from torusgit.torus import TorusAction


def random_action(rng: random.Random, max_rank: int = 3, max_dim: int = 5,
                  entry_bound: int = 3, full_rank: bool = False) -> TorusAction:
    """Random diagonal action; with full_rank the weight matrix is resampled
    until its rank equals the torus rank."""
    from torusgit.lattice import rank as mat_rank

    while True:
        r = rng.randint(1, max_rank)
        n = rng.randint(1, max_dim)
        w = IntMatrix.from_rows(
            [[rng.randint(-entry_bound, entry_bound) for _ in range(n)] for _ in range(r)], n
        )
        if full_rank and mat_rank(w) != r:
            continue
        return TorusAction(r, w)


def random_character(rng: random.Random, rank: int, bound: int = 3):
    return tuple(rng.randint(-bound, bound) for _ in range(rank))


@pytest.fixture
def rng():
    return random.Random(0x5EED)
