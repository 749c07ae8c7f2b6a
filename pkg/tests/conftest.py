import random
from itertools import product

import pytest
from hypothesis import strategies as st

from markoff_hurwitz.core import (
    DoubleSign, Params, Permute, Vieta, apply_move, equation_value, normal_coords,
)
from markoff_hurwitz.enumeration import enumerate_fd


def _seed_points():
    seeds = []
    for a in (1, 2, 3, 4):
        for n in (3, 4, 5):
            for k in range(-12, 13):
                params = Params(a, k, n)
                fd = enumerate_fd(params, 60)
                pts = list(fd.points()) + list(fd.bounded_members(12))
                seeds.extend((params, p) for p in dict.fromkeys(pts))
    return seeds


SEEDS = _seed_points()


def random_move(rng: random.Random, n: int):
    kind = rng.randrange(3)
    if kind == 0:
        return Vieta(rng.randint(1, n))
    if kind == 1:
        s, t = sorted(rng.sample(range(1, n + 1), 2))
        return DoubleSign(s, t)
    sigma = list(range(1, n + 1))
    rng.shuffle(sigma)
    return Permute(tuple(sigma))


def random_solution(rng: random.Random, max_len: int = 10):
    """A solution reached from a fundamental-domain seed by a random word."""
    params, p = rng.choice(SEEDS)
    for _ in range(rng.randint(0, max_len)):
        p = apply_move(p, random_move(rng, params.n), params)
    return params, p


@st.composite
def solutions(draw, max_len: int = 10):
    rng = random.Random(draw(st.integers(min_value=0, max_value=2**32)))
    return random_solution(rng, max_len)


@st.composite
def solutions_with_move(draw):
    params, p = draw(solutions())
    rng = random.Random(draw(st.integers(min_value=0, max_value=2**32)))
    return params, p, random_move(rng, params.n)


@pytest.fixture
def rng():
    return random.Random(20261019)


def naive_scan(params: Params, bound: int) -> list:
    """Normal forms of every solution in the box ``|x_i| <= bound`` with height at most ``bound``."""
    found = set()
    for p in product(range(-bound, bound + 1), repeat=params.n):
        if sum(abs(x) for x in p) <= bound and equation_value(p, params.a) == params.k:
            found.add(normal_coords(p))
    return sorted(found)
