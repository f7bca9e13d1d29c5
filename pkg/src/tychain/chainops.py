"""Monodromy and transfer matrices, block operators, creation operators and
the nested monodromy matrix of a boundary chain.

Operator-valued matrices are always realized by evaluation at numeric
spectral points; residues are obtained by exact polynomial interpolation
rather than symbolic algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ratmat import RatMat
from .rmatrix import PoleError, yang_r, yang_rt
from .reps import (ChainSpec, aux_registry, double_row_action,
                   bulk_row_action, nested_vacuum_registry,
                   quantum_registry)
from .scalars import EXACT, QC, inv, scalar_one
from .tensor import (FactorRegistry, LabeledOperator, LabeledVector,
                     ORTHOGONAL, embed, mat_identity, mat_zeros)


def p_fn(v, rho, sign_int: int):
    """The boundary rational function 1 +- 1/(2v + rho)."""
    den = v + v + rho
    if (den.is_zero() if isinstance(den, QC) else complex(den) == 0):
        raise PoleError("p(v) has a pole at 2v + rho = 0")
    one = den / den
    return one + sign_int * inv(den)


def validate_top_roots(chain_: ChainSpec, roots) -> None:
    """Reject parameter tuples on the excluded divisors.

    Distinct nonzero roots, u_i + u_j != -rho for i < j, 2 u_i != -rho, and
    no collision with Lax poles or their reflections.
    """
    rho = chain_.rho_scalar
    poles = chain_.pole_set()

    def bad(x):
        return x.is_zero() if isinstance(x, QC) else abs(complex(x)) < 1e-9

    for i, u in enumerate(roots):
        if bad(u):
            raise ValueError(f"root {i + 1} is zero")
        if bad(u + u + rho):
            raise ValueError(f"root {i + 1} sits on 2u + rho = 0")
        for p in poles:
            if bad(u - p) or bad(u + p + rho):
                raise ValueError(f"root {i + 1} collides with a Lax pole")
        for j, w in enumerate(roots):
            if i < j:
                if bad(u - w) or bad(u + w):
                    raise ValueError(f"roots {i + 1}, {j + 1} are not generic")
                if bad(u + w + rho):
                    raise ValueError(
                        f"roots {i + 1}, {j + 1} sit on u_i + u_j = -rho")


# -- monodromy and blocks ---------------------------------------------------

def monodromy_S(chain_: ChainSpec, u, registry: FactorRegistry = None,
                aux: str = "a") -> LabeledOperator:
    """Double-row monodromy S(u) on [aux C^{2n}] (x) quantum factors."""
    return double_row_action(chain_, u, registry, aux)


def monodromy_T(chain_: ChainSpec, u, registry: FactorRegistry = None,
                aux: str = "a") -> LabeledOperator:
    """Bulk (single-row) monodromy T(u) on [aux C^{2n}] (x) quantum factors."""
    return bulk_row_action(chain_, u, registry, aux)


def _take_block(op: LabeledOperator, aux: str, half_row: int, half_col: int,
                split: int) -> LabeledOperator:
    """Sub-block of the aux factor split as C^2 (x) C^split."""
    reg = op.registry
    p = reg.position(aux)
    dims = reg.dims
    k = len(dims)
    new_factors = [(f.label, split if f.label == aux else f.dim, f.kind)
                   for f in reg.factors]
    new_reg = FactorRegistry(new_factors)
    nd = new_reg.total_dim

    def f(arr):
        shape = []
        for d in dims:
            shape.append(d)
        split_shape = shape[:p] + [2, split] + shape[p + 1:]
        t = arr.reshape(split_shape + split_shape)
        t = np.take(t, half_row, axis=p)
        t = np.take(t, half_col, axis=len(split_shape) + p - 1)
        return np.ascontiguousarray(t).reshape(nd, nd)

    if isinstance(op.data, RatMat):
        return LabeledOperator(new_reg, op.data.transform(f))
    return LabeledOperator(new_reg, f(op.data))


@dataclass
class BlockSplit:
    """The four n x n operator blocks of a 2n-aux operator."""
    A: LabeledOperator
    B: LabeledOperator
    C: LabeledOperator
    D: LabeledOperator
    aux: str

    def entry(self, block: str, i: int, j: int):
        """Matrix entry (i, j) of the named block, on the quantum factors."""
        op = getattr(self, block)
        from .reps import _entry_block
        return _entry_block(op, self.aux, i, j)


def block_split(op: LabeledOperator, aux: str = "a") -> BlockSplit:
    """Split the 2n auxiliary factor into the A, B, C, D blocks."""
    n2 = op.registry.dim(aux)
    if n2 % 2:
        raise ValueError("block split needs an even auxiliary dimension")
    n = n2 // 2
    return BlockSplit(
        A=_take_block(op, aux, 0, 0, n), B=_take_block(op, aux, 0, 1, n),
        C=_take_block(op, aux, 1, 0, n), D=_take_block(op, aux, 1, 1, n),
        aux=aux)


def reassemble_blocks(blocks: BlockSplit) -> LabeledOperator:
    """Rebuild the 2n-aux operator from its four blocks (bit-exact)."""
    aux = blocks.aux
    a_reg = blocks.A.registry
    n = a_reg.dim(aux)
    mode = blocks.A.mode
    big_factors = [(f.label, 2 * n if f.label == aux else f.dim, f.kind)
                   for f in a_reg.factors]
    big = FactorRegistry(big_factors)
    rest = a_reg.drop(aux)
    out = None
    for (hr, hc, blk) in ((0, 0, blocks.A), (0, 1, blocks.B),
                          (1, 0, blocks.C), (1, 1, blocks.D)):
        # lift the n-block into the 2n factor: e_{hr,hc} (x) block
        x = mat_zeros(2, 2, mode)
        if isinstance(x, RatMat):
            x.re[hr, hc] = 1
        else:
            x[hr, hc] = 1.0
        p = a_reg.position(aux)
        dims = a_reg.dims
        k = len(dims)

        def lift(arr, x=x, p=p):
            t = arr.reshape(dims + dims)
            xarr = x.re if isinstance(x, RatMat) else x
            t2 = np.multiply.outer(xarr, t)
            # axes: (2, 2, rows..., cols...) -> interleave at position p
            order = list(range(2, 2 + 2 * k))
            order.insert(p, 0)
            order.insert(k + 1 + p, 1)
            t2 = np.transpose(t2, order)
            return np.ascontiguousarray(t2).reshape(big.total_dim,
                                                    big.total_dim)

        data = blk.data.transform(lift) if isinstance(blk.data, RatMat) \
            else lift(blk.data)
        term = LabeledOperator(big, data)
        out = term if out is None else out + term
    return out


def transfer_tau(chain_: ChainSpec, v, symmetric: bool = False
                 ) -> LabeledOperator:
    """Double-row transfer matrix tr_a S(v) on the quantum factors.

    With ``symmetric=True`` uses the equivalent form
    p(v) tr A(v) + p(-v-rho) tr A(-v-rho).
    """
    rho = chain_.rho_scalar
    den = v + v + rho
    if den.is_zero() if isinstance(den, QC) else complex(den) == 0:
        raise PoleError("transfer matrix needs 2v + rho != 0")
    if not symmetric:
        return monodromy_S(chain_, v).partial_trace("a")
    pm = chain_.sign_int
    out = None
    for w in (v, -v - rho):
        a_blk = block_split(monodromy_S(chain_, w)).A
        term = a_blk.partial_trace("a").scale(p_fn(w, rho, pm))
        out = term if out is None else out + term
    return out


def transfer_periodic(chain_: ChainSpec, v) -> LabeledOperator:
    """One-row (periodic) transfer matrix tr_a T(v) on the quantum factors."""
    return monodromy_T(chain_, v).partial_trace("a")


# -- covector contraction ---------------------------------------------------

def covector_contraction(registry: FactorRegistry, slots, op_of_index
                         ) -> object:
    """Matrix of a covector-valued operator contraction.

    Contracts the named slots of ``registry``; ``op_of_index(idx)`` returns
    the operator (plain matrix on the remaining registry) that multiplies the
    component with the given slot basis indices.  Returns a
    (rest_dim x full_dim) matrix.
    """
    slots = [slots] if isinstance(slots, str) else list(slots)
    rest = registry.drop(slots)
    slot_dims = [registry.dim(s) for s in slots]
    blocks = [op_of_index(idx)
              for idx in itertools.product(*[range(d) for d in slot_dims])]
    stacked = RatMat.hstack(blocks) if isinstance(blocks[0], RatMat) \
        else np.hstack(blocks)

    # reorder columns from slot-leading composite to registry order
    dims = registry.dims
    total = registry.total_dim
    idx = np.arange(total)
    digits = []
    rem = idx
    for d in reversed(dims):
        digits.append(rem % d)
        rem //= d
    digits.reverse()
    positions = [registry.position(s) for s in slots]
    rest_positions = [i for i in range(len(dims)) if i not in positions]
    perm = np.zeros(total, dtype=np.int64)
    for p in positions + rest_positions:
        perm = perm * dims[p] + digits[p]

    def f(arr):
        return arr[:, perm]

    return stacked.transform(f) if isinstance(stacked, RatMat) else f(stacked)


# -- creation operators -----------------------------------------------------

def beta_components(chain_: ChainSpec, u) -> dict:
    """Single-excitation components: (i, j) -> b_{ibar j}(u) on the quantum
    factors (0-based indices on C^n)."""
    n = chain_.n
    blocks = block_split(monodromy_S(chain_, u))
    out = {}
    for i in range(n):
        for j in range(n):
            out[(i, j)] = blocks.entry("B", n - 1 - i, j)
    return out


@dataclass
class CreationOperator:
    """The multi-excitation creation map W (x) M -> M."""
    chain: ChainSpec
    roots: tuple
    matrix: object           # dim(M) x (n^{2m} dim(M))
    registry: FactorRegistry  # of W (x) M

    @property
    def m(self) -> int:
        return len(self.roots)

    def apply(self, vec: LabeledVector) -> LabeledVector:
        if vec.registry != self.registry:
            raise ValueError("vector is not on the W (x) M registry")
        data = self.matrix @ vec.data
        return LabeledVector(quantum_registry(self.chain), data)


def creation(chain_: ChainSpec, roots, validate: bool = True
             ) -> CreationOperator:
    """Creation operator for len(roots) excitations.

    Built by the ordered product of single-excitation rows interleaved with
    the R-matrices on (a_j, at_i) pairs at arguments -u_j - u_i - rho.
    """
    roots = tuple(roots)
    if validate:
        validate_top_roots(chain_, roots)
    m = len(roots)
    n = chain_.n
    rho = chain_.rho_scalar
    mode = chain_.mode
    q_reg = quantum_registry(chain_)
    full_reg = nested_vacuum_registry(chain_, m)
    if m == 0:
        return CreationOperator(chain_, roots, mat_identity(q_reg.total_dim,
                                                            mode), full_reg)
    total = None
    for k in range(1, m + 1):
        reg_k = q_reg.extend_front(aux_registry(chain_, k).factors)
        rest_k = reg_k.drop([f"at{k}", f"a{k}"])
        comps = beta_components(chain_, roots[k - 1])
        q_labels = [f.label for f in q_reg.factors]

        def op_of(idx, comps=comps, rest_k=rest_k, q_labels=q_labels):
            return embed(comps[idx], q_labels, rest_k).data

        c_k = covector_contraction(reg_k, [f"at{k}", f"a{k}"], op_of)
        rprod = LabeledOperator.identity(reg_k, mode)
        for j in range(k - 1, 0, -1):
            fac = yang_r(n, -roots[j - 1] - roots[k - 1] - rho, mode)
            rprod = rprod @ embed(fac, [f"a{j}", f"at{k}"], reg_k)
        f_k = c_k @ rprod.data
        total = f_k if total is None else total @ f_k
    return CreationOperator(chain_, roots, total, full_reg)


# -- nested monodromy -------------------------------------------------------

def nested_monodromy(chain_: ChainSpec, v, roots, registry=None,
                     aux: str = "na") -> LabeledOperator:
    """Nested monodromy matrix T(v; u) on [aux C^n] (x) W (x) M.

    Dressing of the A block by transposed R-matrices on each auxiliary pair.
    """
    roots = tuple(roots)
    m = len(roots)
    n = chain_.n
    rho = chain_.rho_scalar
    mode = chain_.mode
    if registry is None:
        registry = nested_vacuum_registry(chain_, m).extend_front([(aux, n)])
    out = LabeledOperator.identity(registry, mode)
    for k in range(1, m + 1):
        fac = yang_rt(n, roots[k - 1] - v, mode, ORTHOGONAL)
        out = out @ embed(fac, [f"at{k}", aux], registry)
    for l in range(1, m + 1):
        fac = yang_rt(n, -roots[l - 1] - v - rho, mode, ORTHOGONAL)
        out = out @ embed(fac, [f"a{l}", aux], registry)
    a_blk = block_split(monodromy_S(chain_, v)).A
    slots = [aux] + [f.label for f in quantum_registry(chain_).factors]
    return out @ embed(a_blk.data, slots, registry)


def nested_transfer(chain_: ChainSpec, v, roots, registry=None
                    ) -> LabeledOperator:
    """tr_a T(v; u) on W (x) M."""
    t_op = nested_monodromy(chain_, v, roots, registry)
    return t_op.partial_trace("na")


# -- residue extraction -----------------------------------------------------

def residue_extract(sampler, pole, degree: int, mode: str, order: int = 1):
    """Residue at a simple pole by exact polynomial interpolation.

    ``(w - pole) * sampler(w)`` must be polynomial of degree <= ``degree`` in
    ``w``.  Samples degree + 2 points near the pole; the extra point is a
    holdout that detects an underdeclared degree.
    """
    if order != 1:
        raise ValueError("only simple poles are supported")
    npts = degree + 2
    if mode == EXACT:
        offsets = [QC(Fraction(k, 8)) for k in range(1, npts + 1)]
    else:
        offsets = [complex(k) / 8 for k in range(1, npts + 1)]
    pts = [pole + d for d in offsets]
    samples = []
    for w, d in zip(pts, offsets):
        g = sampler(w)
        samples.append(g.scale(d) if hasattr(g, "scale") else g * d)

    def lagrange_weights(nodes, at):
        ws = []
        for s, xs in enumerate(nodes):
            w = scalar_one(mode)
            for t, xt in enumerate(nodes):
                if t != s:
                    w = w * (at - xt) / (xs - xt)
            ws.append(w)
        return ws

    fit_nodes = pts[:degree + 1]
    fit_samples = samples[:degree + 1]

    def combine(weights):
        out = None
        for wgt, g in zip(weights, fit_samples):
            term = g.scale(wgt) if hasattr(g, "scale") else g * wgt
            out = term if out is None else out + term
        return out

    predicted = combine(lagrange_weights(fit_nodes, pts[-1]))
    actual = samples[-1]
    if hasattr(predicted, "max_dev"):
        dev = predicted.max_dev(actual)
        ok = predicted.equals(actual) if mode == EXACT else dev < 1e-6
    else:
        dev = abs(complex(predicted - actual))
        ok = (predicted - actual == 0) if mode == EXACT else dev < 1e-6
    if not ok:
        raise ValueError(f"declared degree {degree} too small for residue "
                         f"interpolation (holdout deviation {dev})")
    return combine(lagrange_weights(fit_nodes, pole))
