"""Exact checks of the full identity registry across signs and ranks."""

from fractions import Fraction

import pytest

from tychain.identities import identity_params, verify_identity
from tychain.reps import BoundarySpec, chain
from tychain.scalars import QC
from tychain.tensor import ORTHOGONAL, SYMPLECTIC

R_LEVEL = ["yang-baxter", "unitarity", "q-projector", "q-exchange",
           "transposed-yang-baxter", "braided-yang-baxter",
           "braided-transposed"]
CHAIN_LEVEL = ["rtt", "reflection", "symmetry", "bulk-blocks", "block-ab",
               "block-bb", "block-aa", "block-ca", "symm-d", "symm-b",
               "tau-symmetric", "tau-commute", "vacuum-annihilation",
               "vacuum-stability"]
CREATION_LEVEL = ["beta-beta", "beta-pq", "a-beta", "a-beta-sym",
                  "creation-swap", "nested-swap", "nested-rtt",
                  "nested-lowest"]
APPENDIX_LEVEL = ["gl-ab", "gl-db", "gl-bb", "gl-dd", "gl-cd", "gl-ad",
                  "gl-nested-rtt", "gl-nested-swap", "gl-nested-a"]


def small_chain(sign, n):
    return chain(sign, n, 1, sites=[Fraction(1, 3)],
                 profile=(2, (0,) * (n - 1)))


@pytest.mark.parametrize("sign", [ORTHOGONAL, SYMPLECTIC])
@pytest.mark.parametrize("name", R_LEVEL)
def test_r_level_identities(sign, name):
    ch = small_chain(sign, 2)
    for (params, rep) in identity_params(name, ch, seed=5, count=3):
        assert rep.holds and rep.exact, (name, params)


@pytest.mark.parametrize("sign,n", [(ORTHOGONAL, 1), (SYMPLECTIC, 1),
                                    (ORTHOGONAL, 2), (SYMPLECTIC, 2)])
@pytest.mark.parametrize("name", CHAIN_LEVEL + CREATION_LEVEL)
def test_chain_identities(sign, n, name):
    ch = small_chain(sign, n)
    for (params, rep) in identity_params(name, ch, seed=7, count=2):
        assert rep.holds and rep.exact, (name, sign, n, params)


@pytest.mark.parametrize("sign,n", [(ORTHOGONAL, 1), (SYMPLECTIC, 2)])
@pytest.mark.parametrize("name", APPENDIX_LEVEL)
def test_appendix_identities(sign, n, name):
    ch = small_chain(sign, n)
    for (params, rep) in identity_params(name, ch, seed=9, count=2):
        assert rep.holds and rep.exact, (name, sign, n, params)


def test_boundary_module_identities(chain_n2_boundary):
    for name in ["reflection", "symmetry", "block-ab", "block-aa",
                 "vacuum-annihilation"]:
        for (params, rep) in identity_params(name, chain_n2_boundary,
                                             seed=13, count=2):
            assert rep.holds and rep.exact, (name, params)


def test_reflection_for_bare_boundary_operator():
    # the boundary operator alone satisfies the reflection identity
    ch = chain(SYMPLECTIC, 1, 1, sites=[],
               boundary=BoundarySpec((1,), "vector"), profile=(0, ()))
    rep = verify_identity("reflection", ch, {"u": QC(2), "v": QC(5)})
    assert rep.holds and rep.exact


def test_unknown_identity_rejected(chain_n1):
    with pytest.raises(KeyError):
        verify_identity("no-such-id", chain_n1, {})


def test_failure_is_detected(chain_n1):
    # evaluating the symmetry relation with the wrong sign must fail
    bad = chain(ORTHOGONAL, 1, 1, sites=[0], profile=(0, ()))
    rep_good = verify_identity("symmetry", bad, {"u": QC(3)})
    assert rep_good.holds
    from tychain import identities as ids
    lhs_rhs = ids._id_symmetry(bad, {"u": QC(3)})
    lhs, rhs, _ = lhs_rhs[0]
    assert not lhs.equals(rhs.scale(QC(Fraction(99, 100))))
