import random
from fractions import Fraction

import pytest

from siegelsign.streams import (
    AngleModel,
    AngleSource,
    AngleStreamModel,
    EigenformSpec,
    USp4Source,
    lambda_stream,
)
from siegelsign.sums import sieve
from siegelsign.symplectic import PATTERNS, SubgroupKind

X_BIG = 10**6


# (slots touched, sign pattern) for the root elements of Sp4
ROOTS = [
    [((0, 1), 1), ((3, 2), -1)],
    [((1, 0), 1), ((2, 3), -1)],
    [((0, 2), 1)],
    [((1, 3), 1)],
    [((0, 3), 1), ((1, 2), 1)],
    [((2, 0), 1)],
    [((3, 1), 1)],
    [((2, 1), 1), ((3, 0), 1)],
]


def root_element(root, t):
    m = [[Fraction(int(a == b)) for b in range(4)] for a in range(4)]
    for (i, j), sign in root:
        m[i][j] += sign * t
    return tuple(tuple(r) for r in m)


def allowed_scale(kind, level, root):
    """Smallest lattice N^k Z that keeps every touched slot inside the pattern."""
    k = max(PATTERNS[SubgroupKind(kind)][i][j] for (i, j), _ in root)
    return Fraction(level) ** k


def random_member(rng, kind, level, length=4):
    from siegelsign.symplectic import identity, matmul

    g = identity()
    for _ in range(length):
        root = rng.choice(ROOTS)
        t = rng.randint(-3, 3) * allowed_scale(kind, level, root)
        g = matmul(g, root_element(root, t))
    if rng.random() < 0.5:
        g = matmul(g, ((-1, 0, 0, 0), (0, 1, 0, 0), (0, 0, -1, 0), (0, 0, 0, 1)))
    return g


def random_sp4z(rng, length=4):
    from siegelsign.symplectic import J, identity, matmul

    g = identity()
    for _ in range(length):
        if rng.random() < 0.2:
            g = matmul(g, J)
        else:
            g = matmul(g, root_element(rng.choice(ROOTS), rng.randint(-3, 3)))
    return g


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def big_table():
    return sieve(X_BIG)


def semicircle(seed, label=None):
    return AngleSource(AngleStreamModel(AngleModel.SEMICIRCLE, seed), label or f"st{seed}")


@pytest.fixture(scope="session")
def yoshida_pair():
    """Two class-Y streams built from four distinct semicircle sources."""
    f = EigenformSpec("Y", (semicircle(11), semicircle(12)))
    g = EigenformSpec("Y", (semicircle(13), semicircle(14)))
    return lambda_stream(f, X_BIG), lambda_stream(g, X_BIG)


@pytest.fixture(scope="session")
def generic_stream():
    return lambda_stream(EigenformSpec("G", (USp4Source(5, "usp4:5"),)), X_BIG)
