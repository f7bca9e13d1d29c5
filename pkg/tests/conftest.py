"""Shared chain fixtures for the test suite."""

from fractions import Fraction

import pytest

from tychain.reps import BoundarySpec, ChainSpec, Profile, SiteSpec, chain
from tychain.tensor import ORTHOGONAL, SYMPLECTIC


def antisymmetric_square_generators():
    """gl_4 generators on the 6-dim antisymmetric square of C^4."""
    pairs = [(a, b) for a in range(4) for b in range(4) if a < b]

    def emat(i, j):
        m = [[0] * 6 for _ in range(6)]
        for col, (a, b) in enumerate(pairs):
            for (src, other, sgn0) in ((a, b, 1), (b, a, -1)):
                if j == src:
                    if i == other:
                        continue
                    if i < other:
                        row = pairs.index((i, other))
                        sgn = sgn0
                    else:
                        row = pairs.index((other, i))
                        sgn = -sgn0
                    m[row][col] += sgn
        return tuple(tuple(r) for r in m)

    return tuple(tuple(emat(i, j) for j in range(4)) for i in range(4))


@pytest.fixture(scope="session")
def lam2_gens():
    return antisymmetric_square_generators()


@pytest.fixture(scope="session")
def lam2_site(lam2_gens):
    return SiteSpec((1, 1, 0, 0), Fraction(1, 3), "matrices", lam2_gens)


def desk_chain(sign=SYMPLECTIC, n=1, rho=1, sites=(0,), boundary=None,
               profile=None, mode="exact"):
    return chain(sign, n, rho, sites=list(sites), boundary=boundary,
                 profile=profile, mode=mode)


@pytest.fixture(scope="session")
def chain_n1():
    """Symplectic rank-1 chain with one vector site, the workhorse."""
    return desk_chain(SYMPLECTIC, 1, 1, (0,), profile=(1, ()))


@pytest.fixture(scope="session")
def chain_n2_site():
    """Orthogonal rank-2 chain, one vector site, trivial boundary."""
    return desk_chain(ORTHOGONAL, 2, 1, (Fraction(1, 3),),
                      profile=(1, (1,)))


@pytest.fixture(scope="session")
def chain_n2_boundary():
    """Orthogonal rank-2 chain with the defining boundary module."""
    return chain(ORTHOGONAL, 2, 0, sites=[],
                 boundary=BoundarySpec((1, 0), "vector"), profile=(0, (0,)))


@pytest.fixture(scope="session")
def chain_lam2(lam2_site):
    """Rank-2 chain over the antisymmetric-square site; populated sectors."""
    vec = SiteSpec((1, 0, 0, 0), Fraction(2, 5))
    return ChainSpec(ORTHOGONAL, 2, 1, (lam2_site, vec), BoundarySpec((0, 0)),
                     Profile(1, (1,)))
