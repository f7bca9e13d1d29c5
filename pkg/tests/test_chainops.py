from fractions import Fraction

import pytest

from tychain.chainops import (block_split, beta_components, creation,
                              monodromy_S, nested_monodromy, p_fn,
                              reassemble_blocks, residue_extract,
                              transfer_tau, validate_top_roots)
from tychain.ratmat import RatMat
from tychain.reps import (chain, nested_lowest_vector, weight_series,
                          _entry_block)
from tychain.rmatrix import PoleError
from tychain.scalars import EXACT, QC
from tychain.tensor import ORTHOGONAL


def test_p_fn_values():
    assert p_fn(QC(1), QC(1), 1) == QC(Fraction(4, 3))
    assert p_fn(QC(1), QC(0), -1) == QC(Fraction(1, 2))
    v, rho = QC(Fraction(7, 3)), QC(1)
    assert p_fn(v, rho, 1) + p_fn(-v - rho, rho, 1) == QC(2)
    with pytest.raises(PoleError):
        p_fn(QC(Fraction(-1, 2)), QC(1), 1)


def test_trivial_monodromy():
    ch = chain(ORTHOGONAL, 2, 1)
    s = monodromy_S(ch, QC(3))
    assert s.data == RatMat.identity(4)
    tau = transfer_tau(ch, QC(3))
    assert tau.data == RatMat.identity(1).scale(4)


def test_block_split_roundtrip(chain_n1):
    s = monodromy_S(chain_n1, QC(3))
    blocks = block_split(s)
    assert reassemble_blocks(blocks).equals(s)
    # n = 1: blocks are the individual entries
    assert blocks.A.data == _entry_block(s, "a", 0, 0)
    assert blocks.B.data == _entry_block(s, "a", 0, 1)
    assert blocks.C.data == _entry_block(s, "a", 1, 0)
    assert blocks.D.data == _entry_block(s, "a", 1, 1)


def test_transfer_forms_agree(chain_n1, chain_n2_site):
    for ch in (chain_n1, chain_n2_site):
        for v in (QC(Fraction(5, 2)), QC(3)):
            direct = transfer_tau(ch, v)
            sym = transfer_tau(ch, v, symmetric=True)
            assert direct.equals(sym)


def test_transfer_commutes(chain_n1):
    t1 = transfer_tau(chain_n1, QC(2))
    t2 = transfer_tau(chain_n1, QC(7))
    assert (t1 @ t2).equals(t2 @ t1)


def test_creation_single_is_b_entry(chain_n1):
    cr = creation(chain_n1, (QC(2),))
    s12 = block_split(monodromy_S(chain_n1, QC(2))).entry("B", 0, 0)
    assert cr.matrix == s12


def test_creation_recursion(chain_n1):
    # two-excitation operator equals the one-excitation operator composed
    # with the dressed second row
    from tychain.reps import aux_registry, quantum_registry
    from tychain.tensor import LabeledOperator, embed
    from tychain.rmatrix import yang_r
    u = (QC(3), QC(5))
    rho = chain_n1.rho_scalar
    cr2 = creation(chain_n1, u)
    cr1 = creation(chain_n1, u[:1])
    # build F_2 by hand
    q_reg = quantum_registry(chain_n1)
    reg2 = q_reg.extend_front(aux_registry(chain_n1, 2).factors)
    comps = beta_components(chain_n1, u[1])
    from tychain.chainops import covector_contraction
    from tychain.tensor import embed as emb
    rest = reg2.drop(["at2", "a2"])
    ql = [f.label for f in q_reg.factors]
    c2 = covector_contraction(reg2, ["at2", "a2"],
                              lambda idx: emb(comps[idx], ql, rest).data)
    rp = emb(yang_r(chain_n1.n, -u[0] - u[1] - rho, EXACT), ["a1", "at2"],
             reg2)
    assert cr2.matrix == cr1.matrix @ (c2 @ rp.data)


def test_validate_top_roots(chain_n1):
    with pytest.raises(ValueError):
        validate_top_roots(chain_n1, (QC(0),))
    with pytest.raises(ValueError):
        validate_top_roots(chain_n1, (QC(2), QC(2)))
    with pytest.raises(ValueError):
        validate_top_roots(chain_n1, (QC(2), QC(-3)))  # u1 + u2 = -rho
    with pytest.raises(ValueError):
        validate_top_roots(chain_n1, (chain_n1.scalar(0),))
    validate_top_roots(chain_n1, (QC(2), QC(5)))


def test_nested_monodromy_trivial(chain_n1):
    t0 = nested_monodromy(chain_n1, QC(2), ())
    a_blk = block_split(monodromy_S(chain_n1, QC(2))).A
    assert t0.data == a_blk.data


def test_nested_lowest_weights(chain_n2_site):
    roots = (QC(2), QC(5))
    v = QC(Fraction(7, 2))
    t_op = nested_monodromy(chain_n2_site, v, roots)
    eta = nested_lowest_vector(chain_n2_site, 2)
    for i in range(chain_n2_site.n):
        blk = _entry_block(t_op, "na", i, i)
        lam = weight_series(chain_n2_site, i + 1, "nested", roots)(v)
        assert (blk @ eta.data) == eta.data.scale(lam)
    for i in range(chain_n2_site.n):
        for j in range(i):
            blk = _entry_block(t_op, "na", i, j)
            assert (blk @ eta.data).is_zero()


def test_residue_extract_scalars():
    class Wrap:
        def __init__(self, v):
            self.v = v

        def scale(self, s):
            return Wrap(self.v * s)

        def __add__(self, other):
            return Wrap(self.v + other.v)

        def __sub__(self, other):
            return Wrap(self.v - other.v)

        def equals(self, other, tol=0):
            return self.v == other.v

        def max_dev(self, other):
            return abs(complex(self.v - other.v))

    pole = QC(2)
    res = residue_extract(lambda w: Wrap(QC(1) / (w - pole)), pole, 0, EXACT)
    assert res.v == QC(1)
    res2 = residue_extract(lambda w: Wrap((w + QC(1)) / (w - pole)), pole, 1,
                           EXACT)
    assert res2.v == QC(3)
    with pytest.raises(ValueError):
        residue_extract(lambda w: Wrap((w * w * w + QC(1)) / (w - pole)),
                        pole, 1, EXACT)


def test_residue_extract_transposed_r():
    from tychain.rmatrix import q_op, yang_rt
    from tychain.tensor import FactorRegistry, LabeledOperator
    u = QC(4)
    reg = FactorRegistry([("1", 2), ("2", 2)])

    def sampler(w):
        return LabeledOperator(reg, yang_rt(2, u - w, EXACT))

    res = residue_extract(sampler, u, 1, EXACT)
    assert res.data == q_op(2, EXACT)


def test_pole_collision_raises(chain_n1):
    with pytest.raises(PoleError):
        monodromy_S(chain_n1, chain_n1.scalar(0))
    with pytest.raises(PoleError):
        transfer_tau(chain_n1, QC(Fraction(-1, 2)))
