import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tychain.ratmat import RatMat
from tychain.scalars import EXACT, FLOAT, QC
from tychain.tensor import (FactorRegistry, LabeledOperator, LabeledVector,
                            ORTHOGONAL, SYMPLECTIC, embed, kron,
                            mat_from_entries, mat_identity)


def rand_mat(dim, seed, mode=EXACT):
    rng = random.Random(seed)
    rows = [[Fraction(rng.randint(-5, 5), rng.choice([1, 2, 3]))
             for _ in range(dim)] for _ in range(dim)]
    return mat_from_entries(rows, mode)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=4), min_size=1,
                max_size=5))
def test_composite_index_roundtrip(dims):
    if np.prod(dims) > 4096:
        return
    reg = FactorRegistry([(f"f{i}", d) for i, d in enumerate(dims)])
    for idx in range(0, reg.total_dim, max(1, reg.total_dim // 97)):
        assert reg.compose(reg.decompose(idx)) == idx


def test_registry_validation():
    with pytest.raises(ValueError):
        FactorRegistry([("a", 2), ("a", 3)])
    with pytest.raises(ValueError):
        FactorRegistry([("a", 0)])
    reg = FactorRegistry([("a", 2), ("b", 3)])
    with pytest.raises(KeyError):
        reg.position("zz")


def test_kron_identities():
    i2 = mat_identity(2, EXACT)
    assert kron(i2, i2) == mat_identity(4, EXACT)
    e11 = mat_from_entries([[1, 0], [0, 0]], EXACT)
    e22 = mat_from_entries([[0, 0], [0, 1]], EXACT)
    k = kron(e11, e22)
    assert k.entry(1, 1) == QC(1)
    assert sum(1 for i in range(4) for j in range(4)
               if not k.entry(i, j).is_zero()) == 1


def test_kron_mode_mismatch():
    with pytest.raises(ValueError):
        kron(mat_identity(2, EXACT), mat_identity(2, FLOAT))


def test_embed_definition():
    reg = FactorRegistry([("a", 2), ("b", 2)])
    e12 = mat_from_entries([[0, 1], [0, 0]], EXACT)
    assert embed(e12, "a", reg).data == kron(e12, mat_identity(2, EXACT))
    assert embed(mat_identity(2, EXACT), "b", reg).data == \
        mat_identity(4, EXACT)


def test_embed_disjoint_commutation():
    reg = FactorRegistry([("a", 2), ("b", 3)])
    x = rand_mat(3, 21)
    y = rand_mat(2, 22)
    xb = embed(x, "b", reg)
    ya = embed(y, "a", reg)
    assert (xb @ ya).data == (ya @ xb).data


def test_embed_unordered_slots():
    reg = FactorRegistry([("a", 2), ("b", 2), ("c", 3)])
    x = rand_mat(4, 23)
    direct = embed(x, ["b", "a"], reg)
    # swapping the slot list must transpose the pair indexing
    p = mat_from_entries([[1 if (i % 2) * 2 + i // 2 == j else 0
                           for j in range(4)] for i in range(4)], EXACT)
    swapped = embed(p @ x @ p, ["a", "b"], reg)
    assert direct.data == swapped.data


def test_partial_trace_examples():
    reg = FactorRegistry([("1", 2), ("2", 2)])
    x = rand_mat(2, 24)
    big = LabeledOperator(reg, kron(mat_from_entries([[1, 0], [0, 0]], EXACT),
                                    x))
    assert big.partial_trace("1").data == x
    # embed-then-trace an identity gives dim * identity
    ident = embed(mat_identity(2, EXACT), "1", reg)
    assert ident.partial_trace("1").data == mat_identity(2, EXACT).scale(2)


def test_partial_transpose_involution():
    reg = FactorRegistry([("a", 4), ("b", 2)])
    m = LabeledOperator(reg, rand_mat(8, 25))
    for conv in (ORTHOGONAL, SYMPLECTIC):
        twice = m.partial_transpose("a", conv).partial_transpose("a", conv)
        assert twice.data == m.data


def test_partial_transpose_linear():
    reg = FactorRegistry([("a", 2), ("b", 2)])
    x = LabeledOperator(reg, rand_mat(4, 26))
    y = LabeledOperator(reg, rand_mat(4, 27))
    lhs = (x + y).partial_transpose("a", SYMPLECTIC)
    rhs = x.partial_transpose("a", SYMPLECTIC) + \
        y.partial_transpose("a", SYMPLECTIC)
    assert lhs.data == rhs.data


def test_odd_symplectic_rejected():
    reg = FactorRegistry([("a", 3)])
    m = LabeledOperator(reg, rand_mat(3, 28))
    with pytest.raises(ValueError):
        m.partial_transpose("a", SYMPLECTIC)


def test_vector_contraction():
    reg = FactorRegistry([("a", 2), ("b", 2)])
    vec = LabeledVector.basis(reg, reg.compose((1, 0)), EXACT)

    seen = []

    def handler(idx, sub):
        if isinstance(sub, RatMat) and not sub.is_zero():
            seen.append(idx)
        return sub

    out = vec.contract_slots("a", handler)
    assert seen == [(1,)]
    assert out.registry.labels == ("b",)


def test_float_paths():
    reg = FactorRegistry([("a", 2), ("b", 2)])
    m = LabeledOperator.identity(reg, FLOAT)
    assert m.partial_trace("a").data.shape == (2, 2)
    v = LabeledVector.basis(reg, 0, FLOAT)
    assert v.norm() == 1.0
