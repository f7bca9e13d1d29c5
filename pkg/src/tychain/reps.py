"""Chain descriptions and their concrete finite-dimensional realizations.

A chain consists of a sign choice (orthogonal/symplectic), a rank ``n`` (the
generating matrix is 2n x 2n), a boundary shift ``rho``, an ordered list of
bulk sites carrying gl_{2n} modules with inhomogeneities, one boundary module
for the fixed-point subalgebra (so_{2n} or sp_{2n}), and an excitation
profile.  This module builds the Lax operators, the quantum space with its
computed lowest vector, vacuum sectors, and all scalar weight functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .ratmat import RatMat, column_in_span, nullspace
from .rmatrix import PoleError, theta_signs
from .scalars import EXACT, QC, as_scalar, inv, scalar_one
from .tensor import (BOUNDARY, FactorRegistry, LabeledOperator, LabeledVector,
                     ORTHOGONAL, SITE, SYMPLECTIC, embed, kron,
                     mat_from_entries, mat_identity, mat_mode, mat_scale,
                     mat_zeros)
from .weights import WeightFunction

VECTOR = "vector"
ONE_DIMENSIONAL = "one_dimensional"
MATRICES = "matrices"


class RepresentationError(ValueError):
    """A user-supplied representation fails its defining relations."""


def sign_value(sign: str) -> int:
    if sign == ORTHOGONAL:
        return 1
    if sign == SYMPLECTIC:
        return -1
    raise ValueError(f"unknown sign choice {sign!r}")


@dataclass(frozen=True)
class SiteSpec:
    """One bulk tensorand: a gl_{2n} module with an inhomogeneity shift."""
    weight: tuple
    shift: object
    realization: str = VECTOR
    matrices: tuple = None

    def dim(self, n2: int) -> int:
        if self.realization == VECTOR:
            return n2
        return len(self.matrices[0][0])


@dataclass(frozen=True)
class BoundarySpec:
    """The boundary tensorand: an so/sp_{2n} module."""
    weight: tuple
    realization: str = ONE_DIMENSIONAL
    matrices: tuple = None

    def dim(self, n2: int) -> int:
        if self.realization == ONE_DIMENSIONAL:
            return 1
        if self.realization == VECTOR:
            return n2
        return len(self.matrices[0][0])


@dataclass(frozen=True)
class Profile:
    m: int = 0
    levels: tuple = ()


@dataclass(frozen=True)
class ChainSpec:
    sign: str
    n: int
    rho: object
    sites: tuple
    boundary: BoundarySpec
    profile: Profile = Profile()
    mode: str = EXACT
    dim_cap: int = 4096

    def __post_init__(self):
        n2 = 2 * self.n
        if self.n < 1:
            raise ValueError("rank n must be >= 1")
        for s in self.sites:
            if len(s.weight) != n2:
                raise ValueError(f"site weight {s.weight} must have length {n2}")
            if s.realization == VECTOR and tuple(s.weight) != (1,) + (0,) * (n2 - 1):
                raise ValueError("vector sites carry weight (1,0,...,0)")
            if any(s.weight[i] - s.weight[i + 1] < 0 for i in range(n2 - 1)):
                raise ValueError(f"site weight {s.weight} is not dominant")
        b = self.boundary
        if len(b.weight) != self.n:
            raise ValueError(f"boundary weight must have length {self.n}")
        if b.realization == ONE_DIMENSIONAL and any(w != 0 for w in b.weight):
            raise ValueError("a one-dimensional boundary has weight 0")
        if b.realization == VECTOR and tuple(b.weight) != (1,) + (0,) * (self.n - 1):
            raise ValueError("the defining boundary carries weight (1,0,...,0)")
        if len(self.profile.levels) != max(self.n - 1, 0):
            raise ValueError(f"profile needs {self.n - 1} nested level counts")
        shifts = [self.scalar(s.shift) for s in self.sites]
        for i, ci in enumerate(shifts):
            for j, cj in enumerate(shifts):
                if i < j and _coincide(ci, cj):
                    raise ValueError("site inhomogeneities must be distinct")
                if i != j and _coincide(ci, -cj - self.scalar(self.rho)):
                    raise ValueError("site shifts collide across the reflection")

    # -- scalar helpers -------------------------------------------------

    def scalar(self, x):
        return as_scalar(x, self.mode)

    @property
    def rho_scalar(self):
        return self.scalar(self.rho)

    @property
    def sign_int(self) -> int:
        return sign_value(self.sign)

    @property
    def n2(self) -> int:
        return 2 * self.n

    def boundary_shift(self):
        """(rho +- 1)/2, the shift inside the boundary Lax denominator."""
        half = Fraction(1, 2) if self.mode == EXACT else 0.5
        return (self.rho_scalar + self.sign_int) * self.scalar(half)

    def with_mode(self, mode: str) -> "ChainSpec":
        return ChainSpec(self.sign, self.n, self.rho, self.sites,
                         self.boundary, self.profile, mode, self.dim_cap)

    def pole_set(self):
        """Spectral points where the double-row monodromy is singular."""
        rho = self.rho_scalar
        out = []
        for s in self.sites:
            c = self.scalar(s.shift)
            out.extend([c, -rho - c])
        out.append(-self.boundary_shift())
        return out


def _coincide(a, b, tol: float = 1e-9) -> bool:
    if isinstance(a, QC) and isinstance(b, QC):
        return a == b
    return abs(complex(a) - complex(b)) < tol


def chain(sign, n, rho, sites=(), boundary=None, profile=None, mode=EXACT,
          dim_cap=4096) -> ChainSpec:
    """Convenience constructor with vector-site shorthand.

    ``sites`` may list raw shifts (vector realization) or SiteSpec values.
    """
    built = []
    for s in sites:
        if isinstance(s, SiteSpec):
            built.append(s)
        else:
            built.append(SiteSpec((1,) + (0,) * (2 * n - 1), s))
    if boundary is None:
        boundary = BoundarySpec((0,) * n)
    if profile is None:
        profile = Profile(0, (0,) * (n - 1))
    elif isinstance(profile, tuple) and not isinstance(profile, Profile):
        profile = Profile(profile[0], tuple(profile[1]))
    return ChainSpec(sign, n, rho, tuple(built), boundary, profile, mode,
                     dim_cap)


# -- generator matrices -------------------------------------------------

def _unit_matrix(dim: int, i: int, j: int, mode: str):
    rows = [[0] * dim for _ in range(dim)]
    rows[i][j] = 1
    return mat_from_entries(rows, mode)


def site_generators(chain_: ChainSpec, site: SiteSpec):
    """E_ij matrices of a site module; E[i][j] is (2n x 2n)-indexed, 0-based."""
    n2 = chain_.n2
    mode = chain_.mode
    if site.realization == VECTOR:
        return [[_unit_matrix(n2, i, j, mode) for j in range(n2)]
                for i in range(n2)]
    if site.realization == MATRICES:
        return [[mat_from_entries(site.matrices[i][j], mode)
                 for j in range(n2)] for i in range(n2)]
    raise ValueError(f"unknown site realization {site.realization!r}")


def boundary_generators(chain_: ChainSpec, bnd: BoundarySpec = None):
    """F_ij matrices of the boundary module."""
    bnd = chain_.boundary if bnd is None else bnd
    n2 = chain_.n2
    mode = chain_.mode
    if bnd.realization == ONE_DIMENSIONAL:
        z = mat_zeros(1, 1, mode)
        return [[z for _ in range(n2)] for _ in range(n2)]
    if bnd.realization == VECTOR:
        theta = theta_signs(n2, chain_.sign)
        out = []
        for i in range(n2):
            row = []
            for j in range(n2):
                f = _unit_matrix(n2, i, j, mode) - mat_scale(
                    _unit_matrix(n2, n2 - 1 - j, n2 - 1 - i, mode),
                    theta[i] * theta[j])
                row.append(f)
            out.append(row)
        return out
    if bnd.realization == MATRICES:
        return [[mat_from_entries(bnd.matrices[i][j], mode)
                 for j in range(n2)] for i in range(n2)]
    raise ValueError(f"unknown boundary realization {bnd.realization!r}")


def check_gl_brackets(E, quads=None, tol: float = 1e-9) -> None:
    """Verify [E_ij, E_kl] = d_jk E_il - d_il E_kj on the given quadruples."""
    n2 = len(E)
    if quads is None:
        quads = list(itertools.product(range(n2), repeat=4)) if n2 <= 4 else \
            [(i, j, k, l) for i in range(n2) for j in range(n2)
             for k in range(n2) for l in range(n2)
             if (i + 2 * j + 3 * k + 5 * l) % 7 < 2]
    for (i, j, k, l) in quads:
        lhs = E[i][j] @ E[k][l] - E[k][l] @ E[i][j]
        rhs = mat_zeros(*lhs.shape, mat_mode(lhs)) if not isinstance(lhs, RatMat) \
            else RatMat.zeros(*lhs.shape)
        if j == k:
            rhs = rhs + E[i][l]
        if i == l:
            rhs = rhs - E[k][j]
        diff = lhs - rhs
        bad = (not diff.is_zero()) if isinstance(diff, RatMat) else \
            bool(np.max(np.abs(diff)) > tol) if diff.size else False
        if bad:
            raise RepresentationError(
                f"gl bracket [E_{i}{j}, E_{k}{l}] fails")


def check_fixed_brackets(chain_: ChainSpec, F, quads=None, tol: float = 1e-9
                         ) -> None:
    """Verify the so/sp defining relations on the given quadruples."""
    n2 = len(F)
    theta = theta_signs(n2, chain_.sign)
    if quads is None:
        quads = list(itertools.product(range(n2), repeat=4)) if n2 <= 4 else \
            [(i, j, k, l) for i in range(n2) for j in range(n2)
             for k in range(n2) for l in range(n2)
             if (i + 2 * j + 3 * k + 5 * l) % 7 < 2]

    def is_bad(diff):
        if isinstance(diff, RatMat):
            return not diff.is_zero()
        return bool(diff.size and np.max(np.abs(diff)) > tol)

    for (i, j, k, l) in quads:
        lhs = F[i][j] @ F[k][l] - F[k][l] @ F[i][j]
        d = lhs.shape[0]
        rhs = RatMat.zeros(d, d) if isinstance(lhs, RatMat) else \
            np.zeros((d, d), dtype=np.complex128)
        if j == k:
            rhs = rhs + F[i][l]
        if i == l:
            rhs = rhs - F[k][j]
        tij = theta[i] * theta[j]
        if j == n2 - 1 - l:
            rhs = rhs + mat_scale(F[k][n2 - 1 - i], tij)
        if i == n2 - 1 - k:
            rhs = rhs - mat_scale(F[n2 - 1 - j][l], tij)
        if is_bad(lhs - rhs):
            raise RepresentationError(
                f"fixed-subalgebra bracket [F_{i}{j}, F_{k}{l}] fails")
    for i in range(n2):
        for j in range(n2):
            anti = F[i][j] + mat_scale(F[n2 - 1 - j][n2 - 1 - i],
                                       theta[i] * theta[j])
            if is_bad(anti):
                raise RepresentationError(
                    f"antisymmetry F_{i}{j} + theta F-bar fails")


# -- Lax operators -------------------------------------------------------

def _flip_sum(chain_: ChainSpec, gens):
    """sum_ij e_ij (x) X_ji over the auxiliary C^{2n} and a module."""
    n2 = chain_.n2
    out = None
    for i in range(n2):
        for j in range(n2):
            term = kron(_unit_matrix(n2, i, j, chain_.mode), gens[j][i])
            out = term if out is None else out + term
    return out


@lru_cache(maxsize=None)
def _site_flip(chain_: ChainSpec, site_index: int):
    site = chain_.sites[site_index]
    E = site_generators(chain_, site)
    if site.realization == MATRICES:
        check_gl_brackets(E)
    return _flip_sum(chain_, E)


@lru_cache(maxsize=None)
def _boundary_flip(chain_: ChainSpec):
    F = boundary_generators(chain_)
    if chain_.boundary.realization == MATRICES:
        check_fixed_brackets(chain_, F)
    return _flip_sum(chain_, F)


def bulk_lax(chain_: ChainSpec, site_index: int, x):
    """Site Lax operator at argument x: sum e_ij (x) (d_ij - E_ji / x).

    The caller passes the full argument (u minus the site shift).
    """
    if _coincide(x, x * 0):
        raise PoleError(f"bulk Lax operator pole at site {site_index}")
    d = chain_.sites[site_index].dim(chain_.n2)
    return mat_identity(chain_.n2 * d, chain_.mode) - \
        mat_scale(_site_flip(chain_, site_index), inv(x))


def boundary_lax(chain_: ChainSpec, u):
    """Boundary Lax operator at spectral point u."""
    x = u + chain_.boundary_shift()
    if _coincide(x, x * 0):
        raise PoleError("boundary Lax operator pole")
    d = chain_.boundary.dim(chain_.n2)
    return mat_identity(chain_.n2 * d, chain_.mode) - \
        mat_scale(_boundary_flip(chain_), inv(x))


# -- quantum space --------------------------------------------------------

def quantum_registry(chain_: ChainSpec) -> FactorRegistry:
    facs = [(f"s{i + 1}", s.dim(chain_.n2), SITE)
            for i, s in enumerate(chain_.sites)]
    facs.append(("b", chain_.boundary.dim(chain_.n2), BOUNDARY))
    return FactorRegistry(facs)


def double_row_action(chain_: ChainSpec, u, registry: FactorRegistry = None,
                      aux: str = "a") -> LabeledOperator:
    """S(u) realized on [aux C^{2n}] (x) quantum registry.

    Bulk factors left to right, then the boundary factor, then the
    aux-transposed bulk factors in reverse order at reflected arguments.
    """
    rho = chain_.rho_scalar
    if registry is None:
        registry = quantum_registry(chain_).extend_front([(aux, chain_.n2)])
    out = LabeledOperator.identity(registry, chain_.mode)
    for i, s in enumerate(chain_.sites):
        c = chain_.scalar(s.shift)
        out = out @ embed(bulk_lax(chain_, i, u - c), [aux, f"s{i + 1}"],
                          registry)
    out = out @ embed(boundary_lax(chain_, u), [aux, "b"], registry)
    for i in range(len(chain_.sites) - 1, -1, -1):
        c = chain_.scalar(chain_.sites[i].shift)
        d = chain_.sites[i].dim(chain_.n2)
        mini = FactorRegistry([(aux, chain_.n2), ("q", d)])
        lax = LabeledOperator(mini, bulk_lax(chain_, i, -u - rho - c))
        laxt = lax.partial_transpose(aux, chain_.sign)
        out = out @ embed(laxt.data, [aux, f"s{i + 1}"], registry)
    return out


def bulk_row_action(chain_: ChainSpec, u, registry: FactorRegistry = None,
                    aux: str = "a") -> LabeledOperator:
    """T(u) (bulk sites only) on [aux C^{2n}] (x) quantum registry."""
    if registry is None:
        registry = quantum_registry(chain_).extend_front([(aux, chain_.n2)])
    out = LabeledOperator.identity(registry, chain_.mode)
    for i, s in enumerate(chain_.sites):
        c = chain_.scalar(s.shift)
        out = out @ embed(bulk_lax(chain_, i, u - c), [aux, f"s{i + 1}"],
                          registry)
    return out


def sample_points(chain_: ChainSpec, count: int, start: int = 0, extra_avoid=()):
    """Deterministic generic rational spectral points avoiding all poles."""
    avoid = list(chain_.pole_set()) + list(extra_avoid)
    rho = chain_.rho_scalar
    two = chain_.scalar(2)
    out = []
    k = start
    while len(out) < count:
        cand = chain_.scalar(Fraction(3 * k + 2, 3))
        k += 1
        if any(_coincide(cand, a) for a in avoid):
            continue
        if _coincide(two * cand + rho, cand * 0):
            continue
        out.append(cand)
    return out


def _entry_block(op: LabeledOperator, aux: str, i: int, j: int):
    """Matrix entry (i, j) on the aux factor, as a matrix on the rest."""
    reg = op.registry
    p = reg.position(aux)
    dims = reg.dims
    k = len(dims)
    rest_dim = reg.drop(aux).total_dim

    def f(arr):
        t = arr.reshape(dims + dims)
        t = np.take(t, i, axis=p)
        t = np.take(t, j, axis=k - 1 + p)
        return np.ascontiguousarray(t).reshape(rest_dim, rest_dim)

    if isinstance(op.data, RatMat):
        return op.data.transform(f)
    return f(op.data)


def _stack_kernel(mats, mode: str, tol: float = 1e-10):
    if mode == EXACT:
        return nullspace(RatMat.vstack(mats))
    stacked = np.vstack(mats)
    _, s, vh = np.linalg.svd(stacked)
    scale = s[0] if len(s) and s[0] > 0 else 1.0
    rank_ = int(np.sum(s > tol * scale))
    return vh[rank_:].conj().T.copy()


def _normalize_column(col):
    """Scale a single kernel column so its first significant entry is one."""
    if isinstance(col, RatMat) or col.shape[1] != 1:
        return col
    mags = np.abs(col[:, 0])
    lead = int(np.argmax(mags > 0.5 * mags.max()))
    return col / col[lead, 0]


class QuantumSpace:
    """The chain's full module with its computed lowest vector."""

    def __init__(self, chain_: ChainSpec):
        self.chain = chain_
        self.registry = quantum_registry(chain_)
        if self.registry.total_dim > chain_.dim_cap:
            raise ValueError(f"quantum space dim {self.registry.total_dim} "
                             f"exceeds cap {chain_.dim_cap}")
        self.dim = self.registry.total_dim
        self._lowest = None
        self._vacuum = None
        self.degenerate_lowest = False

    def module_highest_columns(self):
        """Per-factor highest-weight columns (annihilated by raising ops)."""
        ch = self.chain
        cols = []
        for i, s in enumerate(ch.sites):
            E = site_generators(ch, s)
            raising = [E[a][b] for a in range(ch.n2) for b in range(ch.n2)
                       if a < b]
            ker = _normalize_column(_stack_kernel(raising, ch.mode))
            if ker.shape[1] != 1:
                raise ValueError(f"site {i + 1} has no unique highest vector")
            cols.append(ker)
        F = boundary_generators(ch)
        raising = [F[a][b] for a in range(ch.n2) for b in range(ch.n2) if a < b]
        if ch.boundary.realization == ONE_DIMENSIONAL:
            cols.append(mat_identity(1, ch.mode))
        else:
            ker = _normalize_column(_stack_kernel(raising, ch.mode))
            if ker.shape[1] != 1:
                raise ValueError("boundary module has no unique highest vector")
            cols.append(ker)
        return cols

    @property
    def lowest_vector(self) -> LabeledVector:
        if self._lowest is None:
            self._lowest = self._compute_lowest()
        return self._lowest

    def _compute_lowest(self) -> LabeledVector:
        ch = self.chain
        pts = sample_points(ch, self.dim + 1)
        blocks = []
        for u in pts:
            s_op = double_row_action(ch, u)
            for i in range(ch.n2):
                for j in range(i):
                    blocks.append(_entry_block(s_op, "a", i, j))
        ker = _stack_kernel(blocks, ch.mode)
        candidate = None
        cols = self.module_highest_columns()
        acc = None
        for c in cols:
            acc = c if acc is None else kron(acc, c)
        candidate = acc
        if ker.shape[1] == 0:
            raise ValueError("no lowest vector: joint kernel is empty")
        if ker.shape[1] > 1:
            self.degenerate_lowest = True
        if ch.mode == EXACT:
            if not column_in_span(candidate, ker):
                raise ValueError("module product vector is not annihilated by "
                                 "the lower triangle")
            data = candidate
        else:
            resid = ker @ (ker.conj().T @ candidate) - candidate
            if np.linalg.norm(resid) > 1e-8 * max(1.0, np.linalg.norm(candidate)):
                raise ValueError("module product vector is not annihilated by "
                                 "the lower triangle")
            data = candidate.reshape(-1)
        return LabeledVector(self.registry, data)

    @property
    def vacuum_basis(self):
        """Basis columns of the joint kernel of the annihilation block."""
        if self._vacuum is None:
            ch = self.chain
            n = ch.n
            pts = sample_points(ch, self.dim + 1)
            blocks = []
            for u in pts:
                s_op = double_row_action(ch, u)
                for i in range(n):
                    for j in range(n):
                        blocks.append(_entry_block(s_op, "a", n + i, j))
            ker = _stack_kernel(blocks, ch.mode)
            if ker.shape[1] == 0:
                raise ValueError("vacuum sector is empty; chain misconfigured")
            self._vacuum = ker
        return self._vacuum


@lru_cache(maxsize=None)
def build_quantum_space(chain_: ChainSpec) -> QuantumSpace:
    return QuantumSpace(chain_)


def vacuum_sector(chain_: ChainSpec):
    """Basis columns of the annihilation-block joint kernel inside M."""
    return build_quantum_space(chain_).vacuum_basis


def aux_registry(chain_: ChainSpec, m: int) -> FactorRegistry:
    """Registry of the 2m auxiliary C^n factors at_1..at_m, a_1..a_m."""
    n = chain_.n
    facs = [(f"at{i + 1}", n) for i in range(m)] + \
        [(f"a{i + 1}", n) for i in range(m)]
    return FactorRegistry(facs)


def nested_vacuum_registry(chain_: ChainSpec, m: int = None) -> FactorRegistry:
    m = chain_.profile.m if m is None else m
    return quantum_registry(chain_).extend_front(
        aux_registry(chain_, m).factors)


def nested_vacuum_basis(chain_: ChainSpec, m: int = None):
    """Basis columns of W (x) M^0 inside the W (x) M registry."""
    m = chain_.profile.m if m is None else m
    space = build_quantum_space(chain_)
    wdim = chain_.n ** (2 * m)
    return kron(mat_identity(wdim, chain_.mode), space.vacuum_basis)


def nested_lowest_vector(chain_: ChainSpec, m: int = None) -> LabeledVector:
    """e_1 (x) ... (x) e_1 (x) xi_M on the W (x) M registry."""
    m = chain_.profile.m if m is None else m
    space = build_quantum_space(chain_)
    reg = nested_vacuum_registry(chain_, m)
    wdim = chain_.n ** (2 * m)
    e1 = mat_zeros(wdim, 1, chain_.mode)
    if isinstance(e1, RatMat):
        e1.re[0, 0] = 1
        low = e1.kron(space.lowest_vector.data)
        return LabeledVector(reg, low)
    e1[0, 0] = 1.0
    low = np.kron(e1.reshape(-1), space.lowest_vector.data)
    return LabeledVector(reg, low)


# -- weight functions ------------------------------------------------------

def weight_series(chain_: ChainSpec, i: int, which: str, roots=()) -> WeightFunction:
    """Named scalar weight function of the chain.

    which: "bulk" (lambda_i, 1 <= i <= 2n), "bulk-reflected"
    (lambda_{2n-i+1}(-v-rho)), "boundary" (mu_i, 1 <= i <= n), "aux-tilde" /
    "aux" (j-th top root factors, i is the root index), "nested"
    (lambda_i(. ; u), 1 <= i <= n, needs all top roots).
    """
    mode = chain_.mode
    rho = chain_.rho_scalar
    one = scalar_one(mode)
    if which == "bulk":
        if not 1 <= i <= chain_.n2:
            raise IndexError(f"bulk weight index {i} out of range")
        out = WeightFunction.one(mode)
        for s in chain_.sites:
            c = chain_.scalar(s.shift)
            w = chain_.scalar(s.weight[i - 1])
            out = out.times(WeightFunction.monomial_ratio(c + w, c, mode))
        return out
    if which == "bulk-reflected":
        if not 1 <= i <= chain_.n2:
            raise IndexError(f"bulk weight index {i} out of range")
        return weight_series(chain_, chain_.n2 - i + 1, "bulk").reflect(rho)
    if which == "boundary":
        if not 1 <= i <= chain_.n:
            raise IndexError(f"boundary weight index {i} out of range")
        sh = chain_.boundary_shift()
        mu = chain_.scalar(chain_.boundary.weight[i - 1])
        return WeightFunction.monomial_ratio(mu - sh, -sh, mode)
    if which == "aux-tilde":
        u = roots[i - 1]
        return WeightFunction.monomial_ratio(u - one, u, mode)
    if which == "aux":
        u = roots[i - 1]
        return WeightFunction.monomial_ratio(-u - rho - one, -u - rho, mode)
    if which == "nested":
        if not 1 <= i <= chain_.n:
            raise IndexError(f"nested weight index {i} out of range")
        out = weight_series(chain_, i, "bulk")
        out = out.times(weight_series(chain_, i, "bulk-reflected"))
        out = out.times(weight_series(chain_, i, "boundary"))
        if i == chain_.n:
            for j in range(1, len(roots) + 1):
                out = out.times(weight_series(chain_, j, "aux-tilde", roots))
                out = out.times(weight_series(chain_, j, "aux", roots))
        return out
    raise ValueError(f"unknown weight series {which!r}")


def lowest_eigenvalue(chain_: ChainSpec, i: int, u):
    """Exact eigenvalue of the diagonal entry s_ii(u) on the lowest vector.

    For i <= n this is lambda_i(u) lambda_{2n-i+1}(-rho-u) mu_i(u); the upper
    half follows from the symmetry relation.
    """
    n = chain_.n
    rho = chain_.rho_scalar

    def full(k, v):
        lam = weight_series(chain_, k, "bulk")(v)
        lam_ref = weight_series(chain_, k, "bulk-reflected")
        return lam * lam_ref(v) * weight_series(chain_, k, "boundary")(v)

    if 1 <= i <= n:
        return full(i, u)
    k = chain_.n2 - i + 1  # i = bar(k)
    pm = chain_.sign_int
    two = chain_.scalar(2)
    val_u = full(k, u)
    val_r = full(k, -u - rho)
    return val_r + chain_.scalar(pm) * (val_u - val_r) / (two * u + rho)
