"""Registry of algebraic identities checked by exact evaluation.

Each identity builder returns a list of (lhs, rhs, restriction) triples of
LabeledOperators; ``restriction`` is an optional column stack onto which both
sides are applied before comparing (for statements that hold only on a
subspace).  In exact mode the comparison is bit-exact; in float mode the
maximal entry deviation is reported.
"""

from __future__ import annotations

import random

import numpy as np

from .chainops import (block_split, beta_components, covector_contraction,
                       creation, monodromy_S, monodromy_T, nested_monodromy,
                       p_fn, residue_extract, transfer_tau, validate_top_roots)
from .ratmat import RatMat
from .rmatrix import (PoleError, braided_r, braided_r_inv, braided_r_norm,
                      p_op, q_op, yang_r, yang_rt)
from .reps import (ChainSpec, RepresentationError, aux_registry,
                   build_quantum_space,
                   nested_lowest_vector, nested_vacuum_basis,
                   nested_vacuum_registry, quantum_registry, sample_points,
                   weight_series)
from .scalars import EXACT, QC, rng_rational, scalar_one
from .tensor import (FactorRegistry, LabeledOperator, ORTHOGONAL, embed,
                     kron, mat_from_entries, mat_identity, mat_scale,
                     mat_zeros)


class IdentityReport:
    def __init__(self, name, params, holds, max_dev, exact):
        self.name = name
        self.params = params
        self.holds = holds
        self.max_dev = max_dev
        self.exact = exact

    def __repr__(self):
        status = "exact" if (self.holds and self.exact) else (
            f"dev={self.max_dev:.3e}" if self.holds else "FAILED")
        return f"<{self.name} {status}>"


def _q_labels(chain_: ChainSpec):
    return [f.label for f in quantum_registry(chain_).factors]


def _pair_registry(chain_: ChainSpec, dims, labels=("x", "y")):
    facs = [(lab, d) for lab, d in zip(labels, dims)]
    return quantum_registry(chain_).extend_front(facs)


def _embed_block(blk, slots, registry):
    return embed(blk.data, slots, registry)


# -- R-matrix level identities ---------------------------------------------

def _id_yang_baxter(chain_, p):
    n2 = chain_.n2
    u, v, z = p["u"], p["v"], p["z"]
    reg = FactorRegistry([("1", n2), ("2", n2), ("3", n2)])
    mode = chain_.mode
    r12 = embed(yang_r(n2, u - v, mode), ["1", "2"], reg)
    r13 = embed(yang_r(n2, u - z, mode), ["1", "3"], reg)
    r23 = embed(yang_r(n2, v - z, mode), ["2", "3"], reg)
    return [(r12 @ r13 @ r23, r23 @ r13 @ r12, None)]


def _id_unitarity(chain_, p):
    n2 = chain_.n2
    u = p["u"]
    mode = chain_.mode
    one = scalar_one(mode)
    reg = FactorRegistry([("1", n2), ("2", n2)])
    lhs = LabeledOperator(reg, yang_r(n2, u, mode) @ yang_r(n2, -u, mode))
    rhs = LabeledOperator.identity(reg, mode).scale(one - one / (u * u))
    return [(lhs, rhs, None)]


def _id_q_projector(chain_, p):
    n2 = chain_.n2
    mode = chain_.mode
    pm = chain_.sign_int
    reg = FactorRegistry([("1", n2), ("2", n2)])
    q = LabeledOperator(reg, q_op(n2, mode, chain_.sign))
    pp = LabeledOperator(reg, p_op(n2, mode))
    return [(q @ q, q.scale(n2), None),
            (pp @ q, q.scale(pm), None),
            (q @ pp, q.scale(pm), None)]


def _id_q_exchange(chain_, p):
    n2 = chain_.n2
    mode = chain_.mode
    rng = random.Random(p.get("seed", 11))
    m = mat_from_entries([[rng_rational(rng) for _ in range(n2)]
                          for _ in range(n2)], mode)
    reg = FactorRegistry([("1", n2), ("2", n2)])
    q = LabeledOperator(reg, q_op(n2, mode, chain_.sign))
    m1 = embed(m, "1", reg)
    m2t = embed(m, "2", reg).partial_transpose("2", chain_.sign)
    return [(q @ m1, q @ m2t, None), (m1 @ q, m2t @ q, None)]


def _id_transposed_yang_baxter(chain_, p):
    # exchange used when moving the dressed A block through creation factors
    n = chain_.n
    mode = chain_.mode
    rho = chain_.rho_scalar
    u1, u2, v = p["u"], p["v"], p["z"]
    reg = FactorRegistry([("x", n), ("y", n), ("a", n)])
    rt_xa = embed(yang_rt(n, -u1 - v - rho, mode), ["x", "a"], reg)
    rt_ya = embed(yang_rt(n, u2 - v, mode), ["y", "a"], reg)
    r_xy = embed(yang_r(n, -u1 - u2 - rho, mode), ["x", "y"], reg)
    return [(rt_xa @ rt_ya @ r_xy, r_xy @ rt_ya @ rt_xa, None)]


def _id_braided_yang_baxter(chain_, p):
    n = chain_.n
    mode = chain_.mode
    rho = chain_.rho_scalar
    u1, u2, w = p["u"], p["v"], p["z"]
    reg = FactorRegistry([("x", n), ("y", n), ("z", n)])
    rb = embed(braided_r(n, u1 - u2, mode), ["x", "y"], reg)
    r_yz_a = embed(yang_r(n, -u2 - w - rho, mode), ["y", "z"], reg)
    r_xz_a = embed(yang_r(n, -u1 - w - rho, mode), ["x", "z"], reg)
    r_yz_b = embed(yang_r(n, -u1 - w - rho, mode), ["y", "z"], reg)
    r_xz_b = embed(yang_r(n, -u2 - w - rho, mode), ["x", "z"], reg)
    out = [(rb @ r_yz_a @ r_xz_a, r_yz_b @ r_xz_b @ rb, None)]
    rbi = embed(braided_r_inv(n, u1 - u2, mode), ["x", "y"], reg)
    r_zx_a = embed(yang_r(n, -w - u1 - rho, mode), ["z", "x"], reg)
    r_zy_a = embed(yang_r(n, -w - u2 - rho, mode), ["z", "y"], reg)
    r_zx_b = embed(yang_r(n, -w - u2 - rho, mode), ["z", "x"], reg)
    r_zy_b = embed(yang_r(n, -w - u1 - rho, mode), ["z", "y"], reg)
    out.append((rbi @ r_zx_a @ r_zy_a, r_zx_b @ r_zy_b @ rbi, None))
    return out


def _id_braided_transposed(chain_, p):
    # exchange used to swap adjacent parameters inside the nested monodromy
    n = chain_.n
    mode = chain_.mode
    rho = chain_.rho_scalar
    u1, u2, v = p["u"], p["v"], p["z"]
    reg = FactorRegistry([("x", n), ("y", n), ("a", n)])
    out = []
    rb = embed(braided_r(n, u1 - u2, mode), ["x", "y"], reg)
    lt1 = embed(yang_rt(n, -u1 - v - rho, mode), ["x", "a"], reg)
    lt2 = embed(yang_rt(n, -u2 - v - rho, mode), ["y", "a"], reg)
    rt1 = embed(yang_rt(n, -u2 - v - rho, mode), ["x", "a"], reg)
    rt2 = embed(yang_rt(n, -u1 - v - rho, mode), ["y", "a"], reg)
    out.append((rb @ lt1 @ lt2, rt1 @ rt2 @ rb, None))
    rbi = embed(braided_r_inv(n, u1 - u2, mode), ["x", "y"], reg)
    lt1 = embed(yang_rt(n, u1 - v, mode), ["x", "a"], reg)
    lt2 = embed(yang_rt(n, u2 - v, mode), ["y", "a"], reg)
    rt1 = embed(yang_rt(n, u2 - v, mode), ["x", "a"], reg)
    rt2 = embed(yang_rt(n, u1 - v, mode), ["y", "a"], reg)
    out.append((rbi @ lt1 @ lt2, rt1 @ rt2 @ rbi, None))
    return out


# -- monodromy level --------------------------------------------------------

def _id_rtt(chain_, p):
    n2 = chain_.n2
    u, v = p["u"], p["v"]
    mode = chain_.mode
    reg = _pair_registry(chain_, (n2, n2))
    t1 = monodromy_T(chain_, u, reg, "x")
    t2 = monodromy_T(chain_, v, reg, "y")
    r12 = embed(yang_r(n2, u - v, mode), ["x", "y"], reg)
    return [(r12 @ t1 @ t2, t2 @ t1 @ r12, None)]


def _id_reflection(chain_, p):
    n2 = chain_.n2
    u, v = p["u"], p["v"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    reg = _pair_registry(chain_, (n2, n2))
    s1 = monodromy_S(chain_, u, reg, "x")
    s2 = monodromy_S(chain_, v, reg, "y")
    r = embed(yang_r(n2, u - v, mode), ["x", "y"], reg)
    rt = embed(yang_rt(n2, -u - v - rho, mode, chain_.sign), ["x", "y"], reg)
    return [(r @ s1 @ rt @ s2, s2 @ rt @ s1 @ r, None)]


def _id_symmetry(chain_, p):
    u = p["u"]
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    s_u = monodromy_S(chain_, u)
    s_r = monodromy_S(chain_, -u - rho)
    lhs = s_r.partial_transpose("a", chain_.sign)
    corr = (s_u - s_r).scale(pm * (scalar_one(chain_.mode) / (u + u + rho)))
    return [(lhs, s_u + corr, None)]


def _bulk_blocks(chain_, x):
    return block_split(monodromy_T(chain_, x))


def _id_bulk_blocks(chain_, p):
    n = chain_.n
    u, v = p["u"], p["v"]
    mode = chain_.mode
    one = scalar_one(mode)
    reg = _pair_registry(chain_, (n, n))
    ql = _q_labels(chain_)
    bu, bv = _bulk_blocks(chain_, u), _bulk_blocks(chain_, v)

    def emb(blk, lab):
        return _embed_block(blk, [lab] + ql, reg)

    r_uv = embed(yang_r(n, u - v, mode), ["x", "y"], reg)
    r_vu = embed(yang_r(n, v - u, mode), ["x", "y"], reg)
    pxy = embed(p_op(n, mode), ["x", "y"], reg)
    a1u, a2v = emb(bu.A, "x"), emb(bv.A, "y")
    d1u, d2v = emb(bu.D, "x"), emb(bv.D, "y")
    c1u, c2v = emb(bu.C, "x"), emb(bv.C, "y")
    b1u, b2v = emb(bu.B, "x"), emb(bv.B, "y")
    d2u, c1v = emb(bu.D, "y"), emb(bv.C, "x")
    a1v = emb(bv.A, "x")
    out = [
        (r_uv @ a1u @ a2v, a2v @ a1u @ r_uv, None),
        (r_uv @ d1u @ d2v, d2v @ d1u @ r_uv, None),
        (c1u @ a2v,
         a2v @ c1u @ r_uv + (pxy @ emb(bu.A, "x") @ c2v).scale(one / (u - v)),
         None),
        (c1u @ d2v,
         r_vu @ d2v @ c1u - (pxy @ d2u @ c1v).scale(one / (u - v)), None),
        (d1u @ a2v - a2v @ d1u,
         (pxy @ b1u @ c2v - b2v @ c1u @ pxy).scale(one / (u - v)), None),
    ]
    return out


def _twisted_blocks(chain_, x):
    return block_split(monodromy_S(chain_, x))


def _id_block_ab(chain_, p):
    n = chain_.n
    u, v = p["u"], p["v"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    one = scalar_one(mode)
    reg = _pair_registry(chain_, (n, n))
    ql = _q_labels(chain_)
    su, sv = _twisted_blocks(chain_, u), _twisted_blocks(chain_, v)

    def emb(blk, lab):
        return _embed_block(blk, [lab] + ql, reg)

    r = embed(yang_r(n, u - v, mode), ["x", "y"], reg)
    rt = embed(yang_rt(n, -u - v - rho, mode), ["x", "y"], reg)
    pxy = embed(p_op(n, mode), ["x", "y"], reg)
    qxy = embed(q_op(n, mode), ["x", "y"], reg)
    lhs = emb(sv.A, "y") @ emb(su.B, "x")
    rhs = (r @ emb(su.B, "x") @ rt @ emb(sv.A, "y")
           + (pxy @ emb(sv.B, "x") @ rt @ emb(su.A, "y")).scale(one / (u - v))
           - (emb(sv.B, "y") @ qxy @ emb(su.D, "x")).scale(
               QC(pm) if mode == EXACT else complex(pm)).scale(
                   one / (u + v + rho)))
    return [(lhs, rhs, None)]


def _id_block_bb(chain_, p):
    n = chain_.n
    u, v = p["u"], p["v"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    reg = _pair_registry(chain_, (n, n))
    ql = _q_labels(chain_)
    su, sv = _twisted_blocks(chain_, u), _twisted_blocks(chain_, v)
    r = embed(yang_r(n, u - v, mode), ["x", "y"], reg)
    rt = embed(yang_rt(n, -u - v - rho, mode), ["x", "y"], reg)
    b1u = _embed_block(su.B, ["x"] + ql, reg)
    b2v = _embed_block(sv.B, ["y"] + ql, reg)
    return [(r @ b1u @ rt @ b2v, b2v @ rt @ b1u @ r, None)]


def _id_block_aa(chain_, p):
    n = chain_.n
    u, v = p["u"], p["v"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    one = scalar_one(mode)
    reg = _pair_registry(chain_, (n, n))
    ql = _q_labels(chain_)
    su, sv = _twisted_blocks(chain_, u), _twisted_blocks(chain_, v)

    def emb(blk, lab):
        return _embed_block(blk, [lab] + ql, reg)

    r = embed(yang_r(n, u - v, mode), ["x", "y"], reg)
    qxy = embed(q_op(n, mode), ["x", "y"], reg)
    lhs = r @ emb(su.A, "x") @ emb(sv.A, "y") - \
        emb(sv.A, "y") @ emb(su.A, "x") @ r
    rhs = (r @ emb(su.B, "x") @ qxy @ emb(sv.C, "y")
           - emb(sv.B, "y") @ qxy @ emb(su.C, "x") @ r).scale(
               -pm * one / (u + v + rho))
    return [(lhs, rhs, None)]


def _id_block_ca(chain_, p):
    n = chain_.n
    u, v = p["u"], p["v"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    one = scalar_one(mode)
    reg = _pair_registry(chain_, (n, n))
    ql = _q_labels(chain_)
    su, sv = _twisted_blocks(chain_, u), _twisted_blocks(chain_, v)

    def emb(blk, lab):
        return _embed_block(blk, [lab] + ql, reg)

    r = embed(yang_r(n, u - v, mode), ["x", "y"], reg)
    rt = embed(yang_rt(n, -u - v - rho, mode), ["x", "y"], reg)
    pxy = embed(p_op(n, mode), ["x", "y"], reg)
    qxy = embed(q_op(n, mode), ["x", "y"], reg)
    lhs = emb(su.C, "x") @ emb(sv.A, "y")
    rhs = (emb(sv.A, "y") @ rt @ emb(su.C, "x") @ r
           + (pxy @ emb(su.A, "x") @ rt @ emb(sv.C, "y")).scale(one / (u - v))
           - (emb(su.D, "x") @ qxy @ emb(sv.C, "y")).scale(
               pm * one / (u + v + rho)))
    return [(lhs, rhs, None)]


def _id_symm_d(chain_, p):
    u = p["u"]
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    one = scalar_one(chain_.mode)
    su = _twisted_blocks(chain_, u)
    sr = _twisted_blocks(chain_, -u - rho)
    lhs = sr.D.partial_transpose("a", ORTHOGONAL)
    rhs = su.A + (su.A - sr.A).scale(pm * one / (u + u + rho))
    return [(lhs, rhs, None)]


def _id_symm_b(chain_, p):
    u = p["u"]
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    one = scalar_one(chain_.mode)
    su = _twisted_blocks(chain_, u)
    sr = _twisted_blocks(chain_, -u - rho)
    lhs = sr.B.partial_transpose("a", ORTHOGONAL).scale(pm)
    rhs = su.B + (su.B - sr.B).scale(pm * one / (u + u + rho))
    return [(lhs, rhs, None)]


# -- creation-operator level -------------------------------------------------

def _beta_contraction(chain_, x, registry, tilde_label, plain_label):
    """Contraction matrix of the creation row on (tilde, plain) slots."""
    n = chain_.n
    comps = beta_components(chain_, x)
    rest = registry.drop([tilde_label, plain_label])
    ql = _q_labels(chain_)

    def op_of(idx):
        return embed(comps[idx], ql, rest).data

    return covector_contraction(registry, [tilde_label, plain_label], op_of)


def _id_beta_beta(chain_, p):
    n = chain_.n
    u1, u2 = p["u"], p["v"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    reg = quantum_registry(chain_).extend_front(
        [("at1", n), ("a1", n), ("at2", n), ("a2", n)])
    reg1 = reg.drop(["at2", "a2"])
    c2_u2 = _beta_contraction(chain_, u2, reg, "at2", "a2")
    c2_u1 = _beta_contraction(chain_, u1, reg, "at2", "a2")
    c1_u1 = _beta_contraction(chain_, u1, reg1, "at1", "a1")
    c1_u2 = _beta_contraction(chain_, u2, reg1, "at1", "a1")
    r_mix = embed(yang_r(n, -u1 - u2 - rho, mode), ["a1", "at2"], reg).data
    rb_t = embed(braided_r(n, u1 - u2, mode), ["at1", "at2"], reg).data
    rb_p = embed(braided_r(n, u1 - u2, mode), ["a1", "a2"], reg).data
    lhs = c1_u1 @ (c2_u2 @ (r_mix @ rb_t))
    rhs = c1_u2 @ (c2_u1 @ (r_mix @ rb_p))
    rest = quantum_registry(chain_)
    return [(_as_map(lhs, rest, reg), _as_map(rhs, rest, reg), None)]


class _MapPair:
    """Rectangular map wrapper so rectangular identities reuse the checks."""

    def __init__(self, data):
        self.data = data

    def __sub__(self, other):
        return _MapPair(self.data - other.data)

    def is_zero(self, tol=1e-12):
        if isinstance(self.data, RatMat):
            return self.data.is_zero()
        return bool(np.all(np.abs(self.data) <= tol))

    def max_dev(self, other):
        d = self.data - other.data
        if isinstance(d, RatMat):
            return d.max_abs()
        return float(np.max(np.abs(d))) if d.size else 0.0

    def equals(self, other, tol=1e-12):
        return (self - other).is_zero(tol)

    def scale(self, s):
        return _MapPair(mat_scale(self.data, s))

    def __add__(self, other):
        return _MapPair(self.data + other.data)

    def __matmul__(self, cols):
        return _MapPair(self.data @ cols)


def _as_map(data, out_reg, in_reg):
    return _MapPair(data)


def _id_beta_pq(chain_, p):
    n = chain_.n
    u = p["u"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    one = scalar_one(mode)
    reg = quantum_registry(chain_).extend_front(
        [("at1", n), ("a1", n), ("a", n)])
    q_pa = embed(q_op(n, mode), ["a1", "a"], reg).data
    q_ta = embed(q_op(n, mode), ["at1", "a"], reg).data
    c_u = _beta_contraction(chain_, u, reg, "at1", "a1")
    c_r = _beta_contraction(chain_, -u - rho, reg, "at1", "a1")
    lhs = _MapPair(c_u @ q_pa)
    qq = q_ta @ q_pa
    pref = p_fn(-u - rho, rho, pm) * pm
    rhs = _MapPair(c_r @ qq).scale(pref) + \
        _MapPair(c_u @ qq).scale(one / (u + u + rho))
    return [(lhs, rhs, None)]


def _id_a_beta(chain_, p):
    n = chain_.n
    u, v = p["u"], p["v"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    one = scalar_one(mode)
    ql = _q_labels(chain_)
    reg = quantum_registry(chain_).extend_front(
        [("at1", n), ("a1", n), ("a", n)])
    rest = reg.drop(["at1", "a1"])

    def a_emb(x, where):
        blk = _twisted_blocks(chain_, x).A
        return embed(blk.data, ["a"] + ql, where).data

    c_u = _beta_contraction(chain_, u, reg, "at1", "a1")
    c_v = _beta_contraction(chain_, v, reg, "at1", "a1")
    lhs = _MapPair(a_emb(v, rest) @ c_u)
    rt_ta = embed(yang_rt(n, u - v, mode), ["at1", "a"], reg).data
    rt_pa = embed(yang_rt(n, -u - v - rho, mode), ["a1", "a"], reg).data
    rt_2u = embed(yang_rt(n, -u - u - rho, mode), ["a1", "a"], reg).data
    q_ta = embed(q_op(n, mode), ["at1", "a"], reg).data
    q_pa = embed(q_op(n, mode), ["a1", "a"], reg).data
    term1 = _MapPair(c_u @ (rt_ta @ rt_pa @ a_emb(v, reg)))
    term2 = _MapPair(c_v @ (q_ta @ rt_2u @ a_emb(u, reg))).scale(one / (u - v))
    term3 = _MapPair(c_v @ (q_ta @ q_pa @ a_emb(-u - rho, reg))).scale(
        -pm * p_fn(-u - rho, rho, pm) / (u + v + rho))
    return [(lhs, term1 + term2 + term3, None)]


def _id_a_beta_sym(chain_, p):
    """Symmetrised exchange with the residue term built by interpolation."""
    n = chain_.n
    u, v = p["u"], p["v"]
    mode = chain_.mode
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    one = scalar_one(mode)
    ql = _q_labels(chain_)
    reg = quantum_registry(chain_).extend_front(
        [("at1", n), ("a1", n), ("a", n)])
    rest = reg.drop(["at1", "a1"])

    def a_emb(x, where):
        blk = _twisted_blocks(chain_, x).A
        return embed(blk.data, ["a"] + ql, where).data

    def c_at(x):
        return _beta_contraction(chain_, x, reg, "at1", "a1")

    def sym_pa(w):
        """{p(w) R^t(u-w) R^t(-u-w-rho) A(w)}^w as an operator on reg."""
        out = None
        for x in (w, -w - rho):
            rt1 = embed(yang_rt(n, u - x, mode), ["at1", "a"], reg).data
            rt2 = embed(yang_rt(n, -u - x - rho, mode), ["a1", "a"], reg).data
            term = mat_scale(rt1 @ rt2 @ a_emb(x, reg), p_fn(x, rho, pm))
            out = term if out is None else out + term
        return out

    lhs = None
    for x in (v, -v - rho):
        term = _MapPair(a_emb(x, rest) @ c_at(u)).scale(p_fn(x, rho, pm))
        lhs = term if lhs is None else lhs + term
    wanted = _MapPair(c_at(u) @ sym_pa(v))

    # clear the regular poles of the symmetrised sampler before interpolating
    clear = [-rho / (one + one), -u - rho]
    for pt in chain_.pole_set():
        clear.extend([pt, -rho - pt])
    cleared = []
    for c in clear:
        if not any((c - c0).is_zero() if isinstance(c, QC)
                   else abs(complex(c - c0)) < 1e-12 for c0 in cleared):
            cleared.append(c)

    def sampler(w):
        g = LabeledOperator(reg, sym_pa(w))
        for c in cleared:
            g = g.scale(w - c)
        return g

    res = residue_extract(sampler, u, degree=len(cleared) + 3, mode=mode)
    scale_back = one
    for c in cleared:
        scale_back = scale_back / (u - c)
    res_data = mat_scale(res.data, scale_back)

    beta_comb = None
    for x in (v, -v - rho):
        term = _MapPair(c_at(x)).scale(p_fn(x, rho, pm) / (u - x))
        beta_comb = term if beta_comb is None else beta_comb + term
    unwanted = _MapPair(beta_comb.data @ res_data).scale(
        one / p_fn(u, rho, pm))
    return [(lhs, wanted + unwanted, None)]


def _id_creation_swap(chain_, p):
    roots = p["roots"]
    i = p.get("i", 1)
    n = chain_.n
    mode = chain_.mode
    m = len(roots)
    swapped = list(roots)
    swapped[i - 1], swapped[i] = swapped[i], swapped[i - 1]
    op_u = creation(chain_, roots)
    op_s = creation(chain_, tuple(swapped))
    reg = op_u.registry
    d = roots[i - 1] - roots[i]
    rb = embed(braided_r(n, d, mode), [f"a{i}", f"a{i + 1}"], reg).data
    rbi = embed(braided_r_inv(n, d, mode), [f"at{i}", f"at{i + 1}"], reg).data
    lhs = _MapPair(op_u.matrix)
    rhs = _MapPair(op_s.matrix @ rb @ rbi)
    return [(lhs, rhs, None)]


# -- nested monodromy level --------------------------------------------------

def _id_nested_swap(chain_, p):
    roots = p["roots"]
    w = p["v"]
    i = p.get("i", 1)
    n = chain_.n
    mode = chain_.mode
    m = len(roots)
    swapped = list(roots)
    swapped[i - 1], swapped[i] = swapped[i], swapped[i - 1]
    reg = nested_vacuum_registry(chain_, m).extend_front([("na", n)])
    t_u = nested_monodromy(chain_, w, roots, reg)
    t_s = nested_monodromy(chain_, w, tuple(swapped), reg)
    d = roots[i - 1] - roots[i]
    rb = embed(braided_r(n, d, mode), [f"a{i}", f"a{i + 1}"], reg)
    rbi = embed(braided_r_inv(n, d, mode), [f"at{i}", f"at{i + 1}"], reg)
    move = rb @ rbi
    out = [(move @ t_u, t_s @ move, None)]
    eta = nested_lowest_vector(chain_, m)
    rb2 = embed(braided_r(n, d, mode), [f"a{i}", f"a{i + 1}"],
                eta.registry)
    rbi2 = embed(braided_r_inv(n, d, mode), [f"at{i}", f"at{i + 1}"],
                 eta.registry)
    lhs_vec = (rb2 @ rbi2).apply(eta)
    out.append((_MapPair(lhs_vec.data), _MapPair(eta.data), None))
    return out


def _id_nested_rtt(chain_, p):
    roots = p["roots"]
    v, w = p["v"], p["w"]
    n = chain_.n
    mode = chain_.mode
    m = len(roots)
    reg = nested_vacuum_registry(chain_, m).extend_front(
        [("na", n), ("nb", n)])
    t_a = nested_monodromy(chain_, v, roots, reg, aux="na")
    t_b = nested_monodromy(chain_, w, roots, reg, aux="nb")
    r = embed(yang_r(n, v - w, mode), ["na", "nb"], reg)
    lhs = r @ t_a @ t_b
    rhs = t_b @ t_a @ r
    basis = nested_vacuum_basis(chain_, m)
    wdim = n ** (2 * m)
    lift = kron(mat_identity(n * n, mode), basis)
    return [(lhs, rhs, lift)]


def _id_nested_lowest(chain_, p):
    roots = p["roots"]
    v = p["v"]
    n = chain_.n
    m = len(roots)
    t_op = nested_monodromy(chain_, v, roots)
    eta = nested_lowest_vector(chain_, m)
    from .reps import _entry_block
    out = []
    for i in range(n):
        blk = _entry_block(t_op, "na", i, i)
        lam = weight_series(chain_, i + 1, "nested", roots)(v)
        lhs = _MapPair(blk @ eta.data)
        rhs = _MapPair(eta.data).scale(lam)
        out.append((lhs, rhs, None))
    for i in range(n):
        for j in range(i):
            blk = _entry_block(t_op, "na", i, j)
            lhs = _MapPair(blk @ eta.data)
            out.append((lhs, lhs.scale(0), None))
    return out


def _id_vacuum_annihilation(chain_, p):
    u = p["u"]
    n = chain_.n
    blocks = _twisted_blocks(chain_, u)
    basis = build_quantum_space(chain_).vacuum_basis
    out = []
    for i in range(n):
        for j in range(n):
            c_ij = blocks.entry("C", i, j)
            lhs = _MapPair(c_ij @ basis)
            out.append((lhs, lhs.scale(0), None))
    return out


def _id_vacuum_stability(chain_, p):
    u = p["u"]
    n = chain_.n
    blocks = _twisted_blocks(chain_, u)
    space = build_quantum_space(chain_)
    basis = space.vacuum_basis
    from .ratmat import column_in_span
    ok = True
    dev = 0.0
    for i in range(n):
        for j in range(n):
            a_ij = blocks.entry("A", i, j)
            image = a_ij @ basis
            if isinstance(image, RatMat):
                for k in range(image.shape[1]):
                    col = image.transform(lambda arr, k=k: arr[:, k:k + 1])
                    if not column_in_span(col, basis):
                        ok = False
            else:
                proj = basis @ np.linalg.lstsq(basis, image, rcond=None)[0]
                dev = max(dev, float(np.max(np.abs(proj - image))))
                if dev > 1e-8:
                    ok = False
    zero = _MapPair(mat_zeros(1, 1, chain_.mode))
    report = zero if ok else _MapPair(mat_identity(1, chain_.mode))
    return [(report, zero, None)]


def _id_tau_symmetric(chain_, p):
    v = p["v"]
    return [(transfer_tau(chain_, v), transfer_tau(chain_, v, symmetric=True),
             None)]


def _id_tau_commute(chain_, p):
    u, v = p["u"], p["v"]
    t1 = transfer_tau(chain_, u)
    t2 = transfer_tau(chain_, v)
    return [(t1 @ t2, t2 @ t1, None)]


# -- appendix (periodic one-row) identities ---------------------------------

def _one_split(chain_, x, aux="a"):
    """1 | (N-1) split of the bulk monodromy: scalar a, rows b, cols c, D."""
    t_op = monodromy_T(chain_, x, aux=aux)
    from .reps import _entry_block
    n2 = chain_.n2
    a_ = _entry_block(t_op, aux, 0, 0)
    b_ = [_entry_block(t_op, aux, 0, j) for j in range(1, n2)]
    c_ = [_entry_block(t_op, aux, i, 0) for i in range(1, n2)]
    reg = quantum_registry(chain_).extend_front([(aux, n2)])
    d_reg = FactorRegistry([(aux, n2 - 1)] +
                           list(quantum_registry(chain_).factors))
    rest_dim = quantum_registry(chain_).total_dim

    def build_d(arr):
        dims = reg.dims
        t = arr.reshape(dims + dims)
        sl = [slice(1, None)] + [slice(None)] * (len(dims) - 1)
        t = t[tuple(sl + sl)]
        nd = (n2 - 1) * rest_dim
        return np.ascontiguousarray(t).reshape(nd, nd)

    d_ = LabeledOperator(d_reg, t_op.data.transform(build_d)
                         if isinstance(t_op.data, RatMat)
                         else build_d(t_op.data))
    return a_, b_, c_, d_


def _id_gl_ab(chain_, p):
    u, v = p["u"], p["v"]
    one = scalar_one(chain_.mode)
    a_v, b_v, _, _ = _one_split(chain_, v)
    a_u, b_u, _, _ = _one_split(chain_, u)
    out = []
    for i in range(chain_.n2 - 1):
        lhs = _MapPair(a_v @ b_u[i])
        rhs = _MapPair(b_u[i] @ a_v).scale((v - u + one) / (v - u)) - \
            _MapPair(b_v[i] @ a_u).scale(one / (v - u))
        out.append((lhs, rhs, None))
    return out


def _id_gl_db(chain_, p):
    u, v = p["u"], p["v"]
    mode = chain_.mode
    one = scalar_one(mode)
    nr = chain_.n2 - 1
    qreg = quantum_registry(chain_)
    ql = [f.label for f in qreg.factors]
    reg = qreg.extend_front([("y", nr), ("x", nr)])
    rest = reg.drop("y")
    _, b_v, _, d_v = _one_split(chain_, v)
    _, b_u, _, d_u = _one_split(chain_, u)

    def cb(blist):
        def op_of(idx):
            return embed(blist[idx[0]], ql, rest).data
        return covector_contraction(reg, ["y"], op_of)

    d_v_rest = embed(d_v.data, ["x"] + ql, rest).data
    d_v_full = embed(d_v.data, ["x"] + ql, reg).data
    d_u_full = embed(d_u.data, ["x"] + ql, reg).data
    rp = embed(yang_r(nr, v - u, mode), ["x", "y"], reg).data
    pp = embed(p_op(nr, mode), ["x", "y"], reg).data
    cb_u = cb(b_u)
    cb_v = cb(b_v)
    lhs = _MapPair(d_v_rest @ cb_u)
    rhs = _MapPair(cb_u @ (d_v_full @ rp)) + \
        _MapPair(cb_v @ (d_u_full @ pp)).scale(one / (v - u))
    return [(lhs, rhs, None)]


def _id_gl_bb(chain_, p):
    u, v = p["u"], p["v"]
    mode = chain_.mode
    one = scalar_one(mode)
    nr = chain_.n2 - 1
    qreg = quantum_registry(chain_)
    ql = [f.label for f in qreg.factors]
    reg = qreg.extend_front([("x", nr), ("y", nr)])
    _, b_u, _, _ = _one_split(chain_, u)
    _, b_v, _, _ = _one_split(chain_, v)

    def cb(blist, registry, slot):
        rest = registry.drop(slot)

        def op_of(idx):
            return embed(blist[idx[0]], ql, rest).data
        return covector_contraction(registry, [slot], op_of)

    # lhs: row at v on slot x, row at u on slot y (u entries act first)
    cy_u_full = cb(b_u, reg, "y")
    cx_v_last = cb(b_v, reg.drop("y"), "x")
    lhs = _MapPair(cx_v_last @ cy_u_full)
    # rhs: row at u on slot y, row at v on slot x (v entries act first)
    cx_v_full = cb(b_v, reg, "x")
    cy_u_last = cb(b_u, reg.drop("x"), "y")
    rp = embed(yang_r(nr, v - u, mode), ["x", "y"], reg).data
    rhs = _MapPair(cy_u_last @ (cx_v_full @ rp)).scale((v - u) / (v - u - one))
    return [(lhs, rhs, None)]


def _id_gl_dd(chain_, p):
    u, v = p["u"], p["v"]
    mode = chain_.mode
    nr = chain_.n2 - 1
    qreg = quantum_registry(chain_)
    ql = [f.label for f in qreg.factors]
    reg = qreg.extend_front([("x", nr), ("y", nr)])
    _, _, _, d_u = _one_split(chain_, u)
    _, _, _, d_v = _one_split(chain_, v)
    dx = embed(d_u.data, ["x"] + ql, reg)
    dy = embed(d_v.data, ["y"] + ql, reg)
    dxe = LabeledOperator(reg, dx.data)
    dye = LabeledOperator(reg, dy.data)
    rp = embed(yang_r(nr, u - v, mode), ["x", "y"], reg)
    return [(rp @ dxe @ dye, dye @ dxe @ rp, None)]


def _id_gl_cd(chain_, p):
    u, v = p["u"], p["v"]
    one = scalar_one(chain_.mode)
    nr = chain_.n2 - 1
    a_u, b_u, c_u, d_u = _one_split(chain_, u)
    a_v, b_v, c_v, d_v = _one_split(chain_, v)
    from .reps import _entry_block
    out = []
    for k in range(nr):
        for i in range(nr):
            for j in range(nr):
                d_ij_v = _entry_block(d_v, "a", i, j)
                d_kj_u = _entry_block(d_u, "a", k, j)
                d_kj_v = _entry_block(d_v, "a", k, j)
                lhs = _MapPair(c_u[k] @ d_ij_v)
                rhs = _MapPair(d_ij_v @ c_u[k]) - \
                    (_MapPair(d_kj_u @ c_v[i]) -
                     _MapPair(d_kj_v @ c_u[i])).scale(one / (u - v))
                out.append((lhs, rhs, None))
    return out


def _id_gl_ad(chain_, p):
    u, v = p["u"], p["v"]
    one = scalar_one(chain_.mode)
    nr = chain_.n2 - 1
    a_u, b_u, c_u, d_u = _one_split(chain_, u)
    a_v, b_v, c_v, d_v = _one_split(chain_, v)
    from .reps import _entry_block
    out = []
    for i in range(nr):
        for j in range(nr):
            d_ij_u = _entry_block(d_u, "a", i, j)
            lhs = _MapPair(a_v @ d_ij_u - d_ij_u @ a_v)
            rhs = (_MapPair(b_u[j] @ c_v[i]) -
                   _MapPair(b_v[j] @ c_u[i])).scale(one / (v - u))
            out.append((lhs, rhs, None))
    return out


def gl_nested_monodromy(chain_, v, roots, registry=None, aux="ga"
                        ) -> LabeledOperator:
    """Periodic-system nested monodromy D(v) R'(v-u_m) ... R'(v-u_1)."""
    nr = chain_.n2 - 1
    mode = chain_.mode
    m = len(roots)
    qreg = quantum_registry(chain_)
    ql = [f.label for f in qreg.factors]
    if registry is None:
        facs = [(aux, nr)] + [(f"g{i + 1}", nr) for i in range(m)]
        registry = qreg.extend_front(facs)
    _, _, _, d_v = _one_split(chain_, v)
    out = embed(d_v.data, [aux] + ql, registry)
    out = LabeledOperator(registry, out.data)
    for k in range(m, 0, -1):
        fac = yang_r(nr, v - roots[k - 1], mode)
        out = out @ embed(fac, [aux, f"g{k}"], registry)
    return out


def _id_gl_nested_rtt(chain_, p):
    roots = p["roots"]
    v, w = p["v"], p["w"]
    nr = chain_.n2 - 1
    mode = chain_.mode
    m = len(roots)
    qreg = quantum_registry(chain_)
    facs = [("ga", nr), ("gb", nr)] + [(f"g{i + 1}", nr) for i in range(m)]
    reg = qreg.extend_front(facs)
    t_a = gl_nested_monodromy(chain_, v, roots, reg, aux="ga")
    t_b = gl_nested_monodromy(chain_, w, roots, reg, aux="gb")
    r = embed(yang_r(nr, v - w, mode), ["ga", "gb"], reg)
    return [(r @ t_a @ t_b, t_b @ t_a @ r, None)]


def _id_gl_nested_swap(chain_, p):
    roots = p["roots"]
    v = p["v"]
    i = p.get("i", 1)
    nr = chain_.n2 - 1
    mode = chain_.mode
    m = len(roots)
    swapped = list(roots)
    swapped[i - 1], swapped[i] = swapped[i], swapped[i - 1]
    qreg = quantum_registry(chain_)
    facs = [("ga", nr)] + [(f"g{i + 1}", nr) for i in range(m)]
    reg = qreg.extend_front(facs)
    t_u = gl_nested_monodromy(chain_, v, roots, reg)
    t_s = gl_nested_monodromy(chain_, v, tuple(swapped), reg)
    d = roots[i - 1] - roots[i]
    rb = embed(braided_r_norm(nr, d, mode), [f"g{i}", f"g{i + 1}"], reg)
    return [(rb @ t_u, t_s @ rb, None)]


def _id_gl_nested_a(chain_, p):
    roots = p["roots"]
    u = p["u"]
    nr = chain_.n2 - 1
    mode = chain_.mode
    m = len(roots)
    a_u, _, c_u, _ = _one_split(chain_, u)
    qreg = quantum_registry(chain_)
    # vacuum of the periodic system: joint kernel of the c-column entries
    space = build_quantum_space(chain_)
    pts = sample_points(chain_, space.dim + 1)
    from .reps import _stack_kernel
    blocks = []
    for x in pts:
        _, _, cs, _ = _one_split(chain_, x)
        blocks.extend(cs)
    l0 = _stack_kernel(blocks, mode)
    wdim = nr ** m
    lift = kron(mat_identity(wdim, mode), l0)
    facs = [(f"g{i + 1}", nr) for i in range(m)]
    reg = qreg.extend_front(facs)
    ql = [f.label for f in qreg.factors]
    a_emb = embed(a_u, ql, reg)
    lam1 = weight_series(chain_, 1, "bulk")(u)
    lhs = _MapPair(a_emb.data @ lift)
    rhs = _MapPair(mat_scale(lift, lam1))
    return [(lhs, rhs, None)]


IDENTITIES = {
    "yang-baxter": (_id_yang_baxter, ("u", "v", "z")),
    "unitarity": (_id_unitarity, ("u",)),
    "q-projector": (_id_q_projector, ()),
    "q-exchange": (_id_q_exchange, ()),
    "transposed-yang-baxter": (_id_transposed_yang_baxter, ("u", "v", "z")),
    "braided-yang-baxter": (_id_braided_yang_baxter, ("u", "v", "z")),
    "braided-transposed": (_id_braided_transposed, ("u", "v", "z")),
    "rtt": (_id_rtt, ("u", "v")),
    "reflection": (_id_reflection, ("u", "v")),
    "symmetry": (_id_symmetry, ("u",)),
    "bulk-blocks": (_id_bulk_blocks, ("u", "v")),
    "block-ab": (_id_block_ab, ("u", "v")),
    "block-bb": (_id_block_bb, ("u", "v")),
    "block-aa": (_id_block_aa, ("u", "v")),
    "block-ca": (_id_block_ca, ("u", "v")),
    "symm-d": (_id_symm_d, ("u",)),
    "symm-b": (_id_symm_b, ("u",)),
    "beta-beta": (_id_beta_beta, ("u", "v")),
    "beta-pq": (_id_beta_pq, ("u",)),
    "a-beta": (_id_a_beta, ("u", "v")),
    "a-beta-sym": (_id_a_beta_sym, ("u", "v")),
    "creation-swap": (_id_creation_swap, ("roots",)),
    "nested-swap": (_id_nested_swap, ("roots", "v")),
    "nested-rtt": (_id_nested_rtt, ("roots", "v", "w")),
    "nested-lowest": (_id_nested_lowest, ("roots", "v")),
    "vacuum-annihilation": (_id_vacuum_annihilation, ("u",)),
    "vacuum-stability": (_id_vacuum_stability, ("u",)),
    "tau-symmetric": (_id_tau_symmetric, ("v",)),
    "tau-commute": (_id_tau_commute, ("u", "v")),
    "gl-ab": (_id_gl_ab, ("u", "v")),
    "gl-db": (_id_gl_db, ("u", "v")),
    "gl-bb": (_id_gl_bb, ("u", "v")),
    "gl-dd": (_id_gl_dd, ("u", "v")),
    "gl-cd": (_id_gl_cd, ("u", "v")),
    "gl-ad": (_id_gl_ad, ("u", "v")),
    "gl-nested-rtt": (_id_gl_nested_rtt, ("roots", "v", "w")),
    "gl-nested-swap": (_id_gl_nested_swap, ("roots", "v")),
    "gl-nested-a": (_id_gl_nested_a, ("roots", "u")),
}


def verify_identity(name: str, chain_: ChainSpec, params: dict
                    ) -> IdentityReport:
    """Evaluate both sides of the named identity and compare.

    Returns a report with exact equality (exact mode) or the maximal entry
    deviation (float mode).
    """
    if name not in IDENTITIES:
        raise KeyError(f"unknown identity {name!r}")
    builder, _ = IDENTITIES[name]
    pairs = builder(chain_, params)
    exact = chain_.mode == EXACT
    holds = True
    dev = 0.0
    for (lhs, rhs, restriction) in pairs:
        if restriction is not None:
            lhs = _MapPair(lhs.data @ restriction)
            rhs = _MapPair(rhs.data @ restriction)
        if exact:
            if not lhs.equals(rhs):
                holds = False
                dev = max(dev, lhs.max_dev(rhs))
        else:
            d = lhs.max_dev(rhs)
            dev = max(dev, d)
            if d > 1e-9:
                holds = False
    return IdentityReport(name, params, holds, dev, exact)


def identity_params(name: str, chain_: ChainSpec, seed: int, count: int = 3):
    """Deterministic generic parameter tuples for an identity, pole-avoiding."""
    import zlib
    _, names = IDENTITIES[name]
    rng = random.Random((zlib.crc32(name.encode()) ^ seed) & 0xFFFFFFFF)
    out = []
    attempts = 0
    while len(out) < count and attempts < 400:
        attempts += 1
        cand = {}
        for key in names:
            if key == "roots":
                m = max(chain_.profile.m, 2)
                roots = tuple(chain_.scalar(rng_rational(rng, 1, 9))
                              for _ in range(m))
                cand[key] = roots
            else:
                cand[key] = chain_.scalar(rng_rational(rng, -9, 9))
        try:
            if "roots" in cand:
                validate_top_roots(chain_, cand["roots"])
            report = verify_identity(name, chain_, cand)
        except RepresentationError:
            raise
        except (PoleError, ZeroDivisionError, ValueError):
            continue
        out.append((cand, report))
    if len(out) < count:
        raise RuntimeError(f"could not find generic parameters for {name}")
    return out
