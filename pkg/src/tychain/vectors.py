"""Bethe vectors, built two independent ways.

The trace-formula route multiplies double-row monodromies and R-matrix
dressings over a stack of C^{2n} auxiliary spaces and traces them against
fixed matrix-unit insertions.  The composite route acts with the creation
operator on a nested vector of the residual one-row system.  The two must
agree identically (not only at Bethe roots), which the tests pin down
bit-exactly in rational mode.

The trace is evaluated lazily: the matrix-unit insertions select a single
auxiliary basis column, so the whole construction is one chain of
matrix-vector products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bethe import BetheRootSet
from .chainops import creation, monodromy_S, nested_monodromy
from .ratmat import RatMat
from .reps import (ChainSpec, build_quantum_space, nested_lowest_vector,
                   nested_vacuum_registry, quantum_registry)
from .rmatrix import yang_r, yang_rt
from .scalars import EXACT, scalar_one
from .tensor import (FactorRegistry, LabeledVector, embed, kron,
                     mat_zeros)

TRACE_FORMULA = "trace-formula"
COMPOSITE = "composite"
CLOSED_FORM = "closed-form"


@dataclass
class BetheVector:
    vector: LabeledVector
    construction: str
    roots: BetheRootSet
    is_zero: bool = False
    norm: float = 0.0
    notes: dict = field(default_factory=dict)


def _finish(chain_, vec: LabeledVector, construction, roots) -> BetheVector:
    nrm = vec.norm()
    zero = vec.is_zero() if vec.mode == EXACT else nrm < 1e-9
    return BetheVector(vec, construction, roots, zero, nrm)


def _level_slots(roots: BetheRootSet):
    out = []
    for k, lvl in enumerate(roots.levels):
        for i in range(len(lvl)):
            out.append((k + 1, i, lvl[i]))
    return out


def _apply_factors(factors, vec: LabeledVector) -> LabeledVector:
    """Apply an ordered operator product (leftmost factor last) to a vector."""
    data = vec.data
    for op in reversed(factors):
        data = op.data @ data
    return LabeledVector(vec.registry, data)


def _component(vec: LabeledVector, fixed: dict) -> object:
    """Extract the sub-vector with the given slot basis indices."""
    reg = vec.registry
    dims = reg.dims
    positions = {reg.position(k): v for k, v in fixed.items()}
    rest_dim = 1
    for i, d in enumerate(dims):
        if i not in positions:
            rest_dim *= d

    def f(arr):
        t = arr.reshape(dims)
        for p in sorted(positions, reverse=True):
            t = np.take(t, positions[p], axis=p)
        return np.ascontiguousarray(t).reshape(-1, 1)

    if isinstance(vec.data, RatMat):
        col = vec.data.transform(lambda a: f(a.reshape(-1)))
        return col
    return f(vec.data).reshape(-1)


def bethe_vector_trace(chain_: ChainSpec, roots: BetheRootSet) -> BetheVector:
    """Bethe vector from the trace formula over (C^{2n})-valued auxiliaries."""
    n = chain_.n
    n2 = chain_.n2
    rho = chain_.rho_scalar
    mode = chain_.mode
    m = roots.m
    lv = _level_slots(roots)
    mbar = len(lv)
    space = build_quantum_space(chain_)
    q_reg = quantum_registry(chain_)
    aux = [(f"A{l + 1}", n2) for l in range(m)] + \
        [(f"B{k}_{i + 1}", n2) for (k, i, _) in lv]
    reg = q_reg.extend_front(aux)
    if reg.total_dim > chain_.dim_cap:
        raise ValueError(f"trace formula needs dim {reg.total_dim} > cap")
    q_labels = [f.label for f in q_reg.factors]

    factors = []
    for l in range(1, m + 1):
        for j in range(1, l):
            fac = yang_rt(n2, -roots.top[j - 1] - roots.top[l - 1] - rho,
                          mode, chain_.sign)
            factors.append(embed(fac, [f"A{j}", f"A{l}"], reg))
        # dressed double-row factor on A_l
        for (k, i, w) in reversed(lv):
            fac = yang_r(n2, -roots.top[l - 1] - w - rho, mode)
            factors.append(embed(fac, [f"A{l}", f"B{k}_{i + 1}"], reg))
        s_op = monodromy_S(chain_, roots.top[l - 1])
        factors.append(embed(s_op.data, [f"A{l}"] + q_labels, reg))
        for (k, i, w) in lv:
            fac = yang_rt(n2, roots.top[l - 1] - w, mode, chain_.sign)
            factors.append(embed(fac, [f"A{l}", f"B{k}_{i + 1}"], reg))
    for (k, i, w) in lv:
        s_op = monodromy_S(chain_, w)
        factors.append(embed(s_op.data, [f"B{k}_{i + 1}"] + q_labels, reg))
    for (k, i, w) in lv:
        for (k2, j, w2) in reversed(lv):
            if k2 < k:
                fac = yang_r(n2, w - w2, mode)
                factors.append(embed(fac, [f"B{k}_{i + 1}", f"B{k2}_{j + 1}"],
                                     reg))

    # matrix units select one auxiliary column (source) and row (target)
    fixed_src = {f"A{l + 1}": n - 1 for l in range(m)}
    fixed_dst = {f"A{l + 1}": n for l in range(m)}
    for (k, i, _) in lv:
        fixed_src[f"B{k}_{i + 1}"] = k - 1
        fixed_dst[f"B{k}_{i + 1}"] = k
    start = LabeledVector.basis(
        FactorRegistry(aux), FactorRegistry(aux).compose(
            [fixed_dst[f[0]] for f in aux]), mode)
    xi = space.lowest_vector
    v0 = LabeledVector(reg, kron(start.data, xi.data) if mode == EXACT
                       else np.kron(start.data, xi.data))
    w_vec = _apply_factors(factors, v0)
    comp = _component(w_vec, fixed_src)
    out = LabeledVector(q_reg, comp if mode == EXACT else comp)
    return _finish(chain_, out, TRACE_FORMULA, roots)


def nested_bethe_vector(chain_: ChainSpec, roots: BetheRootSet
                        ) -> LabeledVector:
    """Nested vector in W (x) M from the one-row trace formula."""
    n = chain_.n
    rho = chain_.rho_scalar
    mode = chain_.mode
    m = roots.m
    lv = _level_slots(roots)
    w_reg = nested_vacuum_registry(chain_, m)
    eta = nested_lowest_vector(chain_, m)
    if not lv:
        return eta
    aux = [(f"v{k}_{i + 1}", n) for (k, i, _) in lv]
    reg = w_reg.extend_front(aux)
    if reg.total_dim > chain_.dim_cap:
        raise ValueError(f"nested vector needs dim {reg.total_dim} > cap")
    w_labels = [f.label for f in w_reg.factors]
    factors = []
    for (k, i, w) in lv:
        t_op = nested_monodromy(chain_, w, roots.top, aux=f"v{k}_{i + 1}")
        factors.append(embed(t_op.data, [f"v{k}_{i + 1}"] + w_labels, reg))
    for (k, i, w) in lv:
        for (k2, j, w2) in reversed(lv):
            if k2 < k:
                fac = yang_r(n, w - w2, mode)
                factors.append(embed(fac, [f"v{k}_{i + 1}", f"v{k2}_{j + 1}"],
                                     reg))
    fixed_src = {f"v{k}_{i + 1}": k - 1 for (k, i, _) in lv}
    fixed_dst = {f"v{k}_{i + 1}": k for (k, i, _) in lv}
    aux_reg = FactorRegistry(aux)
    start = LabeledVector.basis(
        aux_reg, aux_reg.compose([fixed_dst[f[0]] for f in aux]), mode)
    v0 = LabeledVector(reg, kron(start.data, eta.data) if mode == EXACT
                       else np.kron(start.data, eta.data))
    w_vec = _apply_factors(factors, v0)
    comp = _component(w_vec, fixed_src)
    return LabeledVector(w_reg, comp)


def bethe_vector_composite(chain_: ChainSpec, roots: BetheRootSet
                           ) -> BetheVector:
    """Creation operator applied to the nested vector."""
    phi = nested_bethe_vector(chain_, roots)
    op = creation(chain_, roots.top, validate=False)
    psi = op.apply(phi)
    return _finish(chain_, psi, COMPOSITE, roots)


# -- closed forms ------------------------------------------------------------

def _s_entry(chain_: ChainSpec, i: int, j: int, u):
    """Monodromy entry s_ij(u) (1-based) as a matrix on the quantum factors."""
    from .reps import _entry_block
    s_op = monodromy_S(chain_, u)
    return _entry_block(s_op, "a", i - 1, j - 1)


def closed_form_example(which: str, chain_: ChainSpec, roots: BetheRootSet
                        ) -> BetheVector:
    """Printed closed forms for small excitation profiles.

    "product": any m with no nested roots; "single-nested": m = 1 with one
    nested root at some level i; "double-nested": m = 2 with one nested root.
    The single/double nested forms produce the zero vector unless the nested
    root sits at the top nesting level, which is flagged, not raised.
    """
    n = chain_.n
    n2 = chain_.n2
    rho = chain_.rho_scalar
    one = scalar_one(chain_.mode)
    space = build_quantum_space(chain_)
    xi = space.lowest_vector.data
    q_reg = quantum_registry(chain_)
    lv = _level_slots(roots)

    if which == "product":
        if lv or roots.m < 1:
            raise ValueError("product form needs m >= 1 and no nested roots")
        coef = one
        for i in range(roots.m):
            for j in range(i):
                s = roots.top[i] + roots.top[j] + rho
                coef = coef * (s + one) / s
        data = xi
        for u in reversed(roots.top):
            data = _s_entry(chain_, n, n + 1, u) @ data
        vec = LabeledVector(q_reg, data if chain_.mode == EXACT else data)
        return _finish(chain_, vec.scale(coef), CLOSED_FORM, roots)

    if which == "single-nested":
        if roots.m != 1 or len(lv) != 1:
            raise ValueError("single-nested form needs profile m=1, one "
                             "nested root")
        (i_lvl, _, w) = lv[0]
        u1 = roots.top[0]
        t1 = _s_entry(chain_, n, n + 1, u1) @ _s_entry(chain_, i_lvl,
                                                       i_lvl + 1, w)
        inner = _s_entry(chain_, i_lvl, n + 1, u1).scale(
            (u1 - w - one) / (u1 + w + rho)) if chain_.mode == EXACT else \
            _s_entry(chain_, i_lvl, n + 1, u1) * complex(
                (u1 - w - one) / (u1 + w + rho))
        inner = inner - _s_entry(chain_, n, n2 - i_lvl + 1, u1)
        t2 = (inner @ _s_entry(chain_, n, i_lvl + 1, w))
        t2 = t2.scale(one / (u1 - w)) if chain_.mode == EXACT else \
            t2 * complex(one / (u1 - w))
        vec = LabeledVector(q_reg, (t1 + t2) @ xi)
        return _finish(chain_, vec, CLOSED_FORM, roots)

    if which == "double-nested":
        if roots.m != 2 or len(lv) != 1:
            raise ValueError("double-nested form needs profile m=2, one "
                             "nested root")
        (i_lvl, _, w) = lv[0]
        u1, u2 = roots.top

        def sc(mat, scalar):
            return mat.scale(scalar) if chain_.mode == EXACT \
                else mat * complex(scalar)

        s_top = lambda u: _s_entry(chain_, n, n + 1, u)
        s_mix = lambda u: _s_entry(chain_, i_lvl, n + 1, u)
        s_far = lambda u: _s_entry(chain_, n, n2 - i_lvl + 1, u)
        s_low = _s_entry(chain_, n, i_lvl + 1, w)
        term1 = s_top(u1) @ s_top(u2) @ _s_entry(chain_, i_lvl, i_lvl + 1, w)
        inner1 = sc(s_mix(u1), (u1 - w - one) / (u1 + w + rho)) - s_far(u1)
        group = s_top(u1) @ s_mix(u2) + \
            sc(inner1 @ s_top(u2), (u2 + w + rho + one) / (u1 - w))
        bracket = sc(s_top(u1) @ s_far(u2), one / (u2 - w)) - \
            sc(group, (u2 - w - one) / ((u2 - w) * (u2 + w + rho)))
        total = term1 - bracket @ s_low
        total = sc(total, (u1 + u2 + rho + one) / (u1 + u2 + rho))
        vec = LabeledVector(q_reg, total @ xi)
        return _finish(chain_, vec, CLOSED_FORM, roots)

    raise ValueError(f"unknown closed form {which!r}")
