from fractions import Fraction

import numpy as np
import pytest

from tychain.ratmat import RatMat
from tychain.reps import (BoundarySpec, ChainSpec, Profile,
                          boundary_generators, build_quantum_space, bulk_lax,
                          boundary_lax, chain, check_fixed_brackets,
                          check_gl_brackets, double_row_action,
                          lowest_eigenvalue, nested_lowest_vector,
                          nested_vacuum_basis, site_generators,
                          weight_series, _entry_block)
from tychain.rmatrix import PoleError, yang_r
from tychain.scalars import EXACT, FLOAT, QC
from tychain.tensor import ORTHOGONAL, SYMPLECTIC


def test_vector_lax_is_yang_r():
    ch = chain(ORTHOGONAL, 1, 0, sites=[0], profile=(0, ()))
    for u in (QC(5), QC(Fraction(7, 3))):
        assert bulk_lax(ch, 0, u) == yang_r(2, u, EXACT)


def test_lax_large_argument_near_identity():
    ch = chain(ORTHOGONAL, 1, 0, sites=[0], profile=(0, ()))
    lax = bulk_lax(ch, 0, QC(10 ** 6)).to_complex()
    assert np.max(np.abs(lax - np.eye(4))) < 3 * 2 / 1e6


def test_lax_pole():
    ch = chain(ORTHOGONAL, 1, 0, sites=[0], profile=(0, ()))
    with pytest.raises(PoleError):
        bulk_lax(ch, 0, QC(0))
    with pytest.raises(PoleError):
        boundary_lax(chain(SYMPLECTIC, 1, 1, sites=[]), QC(0))


def test_one_dimensional_boundary_lax_is_identity():
    ch = chain(ORTHOGONAL, 2, 1)
    for u in (QC(1), QC(Fraction(9, 4))):
        assert boundary_lax(ch, u) == RatMat.identity(4)


def test_vector_boundary_block():
    # (1,1) module block of the boundary operator: I - F_11/(u + 1/2)
    ch = chain(ORTHOGONAL, 2, 0, sites=[],
               boundary=BoundarySpec((1, 0), "vector"), profile=(0, (0,)))
    u = QC(1)
    lax = boundary_lax(ch, u)
    f = boundary_generators(ch)
    # entry (1,1) on the auxiliary factor
    d = 4
    blk = [[lax.entry(0 * d + r, 0 * d + c) for c in range(d)]
           for r in range(d)]
    expect = RatMat.identity(4) - f[0][0].scale(QC(Fraction(2, 3)))
    assert RatMat.from_entries(blk) == expect
    assert f[0][0] == RatMat.from_entries(
        [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1]])


def test_bracket_checks_reject_corrupted():
    ch = chain(SYMPLECTIC, 1, 0, sites=[0], profile=(0, ()))
    E = site_generators(ch, ch.sites[0])
    check_gl_brackets(E)
    bad = [row[:] for row in E]
    bad[0][1] = bad[0][1].scale(2)
    with pytest.raises(ValueError):
        check_gl_brackets(bad)
    F = boundary_generators(chain(SYMPLECTIC, 1, 0, sites=[],
                                  boundary=BoundarySpec((1,), "vector"),
                                  profile=(0, ())))
    check_fixed_brackets(chain(SYMPLECTIC, 1, 0, sites=[],
                               boundary=BoundarySpec((1,), "vector"),
                               profile=(0, ())), F)


def test_chain_validation():
    with pytest.raises(ValueError):
        chain(ORTHOGONAL, 1, 0, sites=[0, 0], profile=(0, ()))
    with pytest.raises(ValueError):
        chain(ORTHOGONAL, 1, 0, sites=[1, -1], profile=(0, ()))  # c = -c'-rho
    with pytest.raises(ValueError):
        ChainSpec(ORTHOGONAL, 2, 0, (), BoundarySpec((1, 1), "vector"),
                  Profile(0, (0,)))


def test_quantum_space_dimensions():
    ch0 = chain(ORTHOGONAL, 2, 1)
    assert build_quantum_space(ch0).dim == 1
    ch1 = chain(SYMPLECTIC, 1, 1, sites=[0], profile=(0, ()))
    assert build_quantum_space(ch1).dim == 2


def test_lowest_vector_annihilation_exact(chain_n1):
    qs = build_quantum_space(chain_n1)
    xi = qs.lowest_vector.data
    for u in (QC(3), QC(Fraction(9, 2)), QC(-7)):
        s_op = double_row_action(chain_n1, u)
        n2 = chain_n1.n2
        for i in range(n2):
            for j in range(i):
                blk = _entry_block(s_op, "a", i, j)
                assert (blk @ xi).is_zero()


def test_lowest_vector_diagonal_weights(chain_n1):
    qs = build_quantum_space(chain_n1)
    xi = qs.lowest_vector.data
    u = QC(Fraction(7, 2))
    s_op = double_row_action(chain_n1, u)
    for i in range(chain_n1.n2):
        blk = _entry_block(s_op, "a", i, i)
        lam = lowest_eigenvalue(chain_n1, i + 1, u)
        assert (blk @ xi) == xi.scale(lam)


def test_vacuum_sector_dims(chain_n2_boundary):
    qs = build_quantum_space(chain_n2_boundary)
    assert qs.vacuum_basis.shape[1] == 2


def test_vacuum_trivial_chain():
    ch = chain(ORTHOGONAL, 1, 1)
    qs = build_quantum_space(ch)
    assert qs.vacuum_basis.shape == (1, 1)


def test_weight_series_examples():
    ch = chain(SYMPLECTIC, 1, 1, sites=[0], profile=(0, ()))
    lam1 = weight_series(ch, 1, "bulk")
    assert lam1(QC(3)) == QC(Fraction(2, 3))
    assert weight_series(ch, 2, "bulk")(QC(3)) == QC(1)
    aux = weight_series(ch, 1, "aux", roots=(QC(2),))
    # (v + u + rho + 1)/(v + u + rho) at v=3, u=2, rho=1
    assert aux(QC(3)) == QC(Fraction(7, 6))
    aux_t = weight_series(ch, 1, "aux-tilde", roots=(QC(2),))
    assert aux_t(QC(3)) == QC(2)


def test_nested_weight_trivial_chain():
    # no sites, trivial boundary: nested weight is the two aux factors
    ch = chain(ORTHOGONAL, 1, 0, sites=[], profile=(1, ()))
    u = QC(2)
    w = weight_series(ch, 1, "nested", roots=(u,))
    v = QC(5)
    expect = (v - u + QC(1)) / (v - u) * (v + u + QC(1)) / (v + u)
    assert w(v) == expect


def test_nested_lowest_vector_layout(chain_n1):
    eta = nested_lowest_vector(chain_n1, 2)
    assert eta.registry.labels[:4] == ("at1", "at2", "a1", "a2")
    assert eta.data.entry(0, 0) == QC(1)
    lift = nested_vacuum_basis(chain_n1, 1)
    assert lift.shape[0] == chain_n1.n ** 2 * 2


def test_user_matrices_site(lam2_site):
    ch = ChainSpec(ORTHOGONAL, 2, 1, (lam2_site,), BoundarySpec((0, 0)),
                   Profile(0, (0,)))
    qs = build_quantum_space(ch)
    assert qs.dim == 6
    assert qs.lowest_vector.data.entry(0, 0) == QC(1)
    lam1 = weight_series(ch, 1, "bulk")
    # highest weight (1,1,0,0): lambda_1(u) = (u - c - 1)/(u - c)
    assert lam1(QC(2)) == (QC(2) - QC(Fraction(1, 3)) - QC(1)) / \
        (QC(2) - QC(Fraction(1, 3)))


def test_float_mode_space(chain_n1):
    f = chain_n1.with_mode(FLOAT)
    qs = build_quantum_space(f)
    assert qs.lowest_vector.data.shape == (2,)
    assert abs(qs.lowest_vector.data[0] - 1) < 1e-12
