"""Factor-labeled dense tensor linear algebra.

An operator lives on an ordered tensor product of registered factors
(auxiliary spaces, site modules, a boundary module).  The composite basis is
row-major: the index of ``(i_1, ..., i_k)`` (0-based) is
``sum_s i_s * prod_{t>s} d_t``.  Embedding, partial trace and partial
transpose address factors by label, never by raw index arithmetic at call
sites.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ratmat import RatMat
from .scalars import ABS_TOL, EXACT, FLOAT, QC

AUX = "aux"
SITE = "site"
BOUNDARY = "boundary"

ORTHOGONAL = "orthogonal"
SYMPLECTIC = "symplectic"


@dataclass(frozen=True)
class Factor:
    label: str
    dim: int
    kind: str = AUX


class FactorRegistry:
    """Ordered list of labeled tensor factors."""

    def __init__(self, factors: Iterable):
        fs = []
        for f in factors:
            if isinstance(f, Factor):
                fs.append(f)
            else:
                label, dim = f[0], f[1]
                kind = f[2] if len(f) > 2 else AUX
                fs.append(Factor(label, int(dim), kind))
        self.factors = tuple(fs)
        labels = [f.label for f in self.factors]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate factor labels in {labels}")
        if any(f.dim <= 0 for f in self.factors):
            raise ValueError("factor dimensions must be positive")
        self._pos = {f.label: i for i, f in enumerate(self.factors)}

    @property
    def labels(self):
        return tuple(f.label for f in self.factors)

    @property
    def dims(self):
        return tuple(f.dim for f in self.factors)

    @property
    def total_dim(self) -> int:
        d = 1
        for f in self.factors:
            d *= f.dim
        return d

    def position(self, label: str) -> int:
        if label not in self._pos:
            raise KeyError(f"unknown factor label {label!r}")
        return self._pos[label]

    def dim(self, label: str) -> int:
        return self.factors[self.position(label)].dim

    def compose(self, indices: Sequence[int]) -> int:
        idx = 0
        for i, f in zip(indices, self.factors):
            idx = idx * f.dim + i
        return idx

    def decompose(self, idx: int):
        out = []
        for f in reversed(self.factors):
            out.append(idx % f.dim)
            idx //= f.dim
        return tuple(reversed(out))

    def drop(self, labels) -> "FactorRegistry":
        labels = {labels} if isinstance(labels, str) else set(labels)
        return FactorRegistry([f for f in self.factors if f.label not in labels])

    def extend_front(self, factors) -> "FactorRegistry":
        return FactorRegistry(list(factors) + list(self.factors))

    def __eq__(self, other):
        return (isinstance(other, FactorRegistry)
                and self.labels == other.labels and self.dims == other.dims)

    def __repr__(self):
        inner = ", ".join(f"{f.label}:{f.dim}" for f in self.factors)
        return f"FactorRegistry({inner})"


# -- raw matrix helpers, generic over the two scalar modes ----------------

def mat_mode(m) -> str:
    return EXACT if isinstance(m, RatMat) else FLOAT


def mat_identity(dim: int, mode: str):
    if mode == EXACT:
        return RatMat.identity(dim)
    return np.eye(dim, dtype=np.complex128)


def mat_zeros(rows: int, cols: int, mode: str):
    if mode == EXACT:
        return RatMat.zeros(rows, cols)
    return np.zeros((rows, cols), dtype=np.complex128)


def kron(a, b):
    """Kronecker product under the row-major composite ordering."""
    ma, mb = mat_mode(a), mat_mode(b)
    if ma != mb:
        raise ValueError(f"scalar mode mismatch: {ma} vs {mb}")
    if ma == EXACT:
        return a.kron(b)
    return np.kron(a, b)


def mat_scale(m, value):
    if isinstance(m, RatMat):
        return m.scale(value)
    return m * complex(value) if isinstance(value, QC) else m * value


def mat_from_entries(rows, mode: str):
    if mode == EXACT:
        return RatMat.from_entries(rows)
    return np.array([[complex(QC.coerce(v)) if not isinstance(v, (complex, float))
                      else complex(v) for v in row] for row in rows],
                    dtype=np.complex128)


def mat_to_float(m) -> np.ndarray:
    return m.to_complex() if isinstance(m, RatMat) else np.asarray(m)


def _shuffle(arr, f):
    """Apply an index-shuffling map to a RatMat or ndarray."""
    if isinstance(arr, RatMat):
        return arr.transform(f)
    return f(arr)


# -- labeled operators ------------------------------------------------------

class LabeledOperator:
    """Square matrix on the composite basis of a factor registry."""

    def __init__(self, registry: FactorRegistry, data):
        d = registry.total_dim
        if data.shape != (d, d):
            raise ValueError(f"data shape {data.shape} != registry dim {d}")
        self.registry = registry
        self.data = data

    @property
    def mode(self) -> str:
        return mat_mode(self.data)

    @classmethod
    def identity(cls, registry: FactorRegistry, mode: str):
        return cls(registry, mat_identity(registry.total_dim, mode))

    def _check(self, other: "LabeledOperator"):
        if self.registry != other.registry:
            raise ValueError("operators live on different registries")
        if self.mode != other.mode:
            raise ValueError("scalar mode mismatch")

    def __matmul__(self, other):
        self._check(other)
        return LabeledOperator(self.registry, self.data @ other.data)

    def __add__(self, other):
        self._check(other)
        return LabeledOperator(self.registry, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return LabeledOperator(self.registry, self.data - other.data)

    def __neg__(self):
        return LabeledOperator(self.registry, -self.data)

    def scale(self, value):
        return LabeledOperator(self.registry, mat_scale(self.data, value))

    def trace(self):
        if isinstance(self.data, RatMat):
            return self.data.trace()
        return complex(np.trace(self.data))

    def is_zero(self, tol: float = ABS_TOL) -> bool:
        if isinstance(self.data, RatMat):
            return self.data.is_zero()
        return bool(np.all(np.abs(self.data) <= tol))

    def equals(self, other: "LabeledOperator", tol: float = ABS_TOL) -> bool:
        self._check(other)
        return (self - other).is_zero(tol)

    def max_dev(self, other: "LabeledOperator") -> float:
        self._check(other)
        diff = self.data - other.data
        if isinstance(diff, RatMat):
            return diff.max_abs()
        return float(np.max(np.abs(diff))) if diff.size else 0.0

    def to_float(self) -> "LabeledOperator":
        return LabeledOperator(self.registry, mat_to_float(self.data))

    # -- factor-aware operations ----------------------------------------

    def partial_trace(self, label: str) -> "LabeledOperator":
        reg = self.registry
        p = reg.position(label)
        dims = reg.dims
        k = len(dims)
        rest = reg.drop(label)
        rd = rest.total_dim

        def f(arr):
            t = arr.reshape(dims + dims)
            t = np.trace(t, axis1=p, axis2=k + p)
            return t.reshape(rd, rd)

        return LabeledOperator(rest, _shuffle(self.data, f))

    def partial_transpose(self, label: str, convention: str = ORTHOGONAL
                          ) -> "LabeledOperator":
        reg = self.registry
        p = reg.position(label)
        dims = reg.dims
        k = len(dims)
        n = dims[p]
        if convention == SYMPLECTIC:
            if n % 2:
                raise ValueError("symplectic transpose needs even dimension")
            theta_signs_ = [-1] * (n // 2) + [1] * (n // 2)
        elif convention == ORTHOGONAL:
            theta_signs_ = None
        else:
            raise ValueError(f"unknown transpose convention {convention!r}")

        def f(arr):
            t = arr.reshape(dims + dims)
            t = np.swapaxes(t, p, k + p)
            t = np.flip(t, axis=(p, k + p))
            if theta_signs_ is not None:
                dtype = object if arr.dtype == object else np.int64
                theta = np.array(theta_signs_, dtype=dtype)
                sh_r = [1] * 2 * k
                sh_r[p] = n
                sh_c = [1] * 2 * k
                sh_c[k + p] = n
                t = t * theta.reshape(sh_r) * theta.reshape(sh_c)
            d = arr.shape[0]
            return np.ascontiguousarray(t).reshape(d, d)

        return LabeledOperator(reg, _shuffle(self.data, f))

    def apply(self, vec: "LabeledVector") -> "LabeledVector":
        if vec.registry != self.registry:
            raise ValueError("vector lives on a different registry")
        return LabeledVector(self.registry, self.data @ vec.data)

    def apply_columns(self, cols):
        """Apply to a dim x k stack of column vectors (RatMat or ndarray)."""
        return self.data @ cols


def embed(x, slots, registry: FactorRegistry) -> LabeledOperator:
    """Embed an operator given on the listed slots, identity elsewhere.

    ``x`` is a square matrix on the tensor product of the named slots, in the
    listed order.  A single label may be passed instead of a list.
    """
    if isinstance(slots, str):
        slots = [slots]
    slots = list(slots)
    if len(set(slots)) != len(slots):
        raise ValueError("embedding slots must be distinct")
    mode = mat_mode(x)
    dslots = [registry.dim(s) for s in slots]
    dx = 1
    for d in dslots:
        dx *= d
    if x.shape != (dx, dx):
        raise ValueError(f"operator shape {x.shape} does not match slots "
                         f"{slots} of dims {dslots}")
    total = registry.total_dim
    rest = [f for f in registry.factors if f.label not in slots]
    rest_dim = 1
    for f in rest:
        rest_dim *= f.dim
    big = kron(x, mat_identity(rest_dim, mode))

    # permutation taking a full-registry index to its (slots..., rest...) index
    order = [registry.position(s) for s in slots] + \
            [registry.position(f.label) for f in rest]
    dims = registry.dims
    k = len(dims)
    idx = np.arange(total)
    digits = []
    rem = idx
    for d in reversed(dims):
        digits.append(rem % d)
        rem //= d
    digits.reverse()
    perm = np.zeros(total, dtype=np.int64)
    for pos in order:
        perm = perm * dims[pos] + digits[pos]

    def f(arr):
        return arr[np.ix_(perm, perm)]

    return LabeledOperator(registry, _shuffle(big, f))


class LabeledVector:
    """Column vector on the composite basis of a factor registry."""

    def __init__(self, registry: FactorRegistry, data):
        self.registry = registry
        self.data = data
        d = registry.total_dim
        shape = data.shape
        if shape not in ((d,), (d, 1)):
            raise ValueError(f"vector shape {shape} != registry dim {d}")

    @property
    def mode(self) -> str:
        return EXACT if isinstance(self.data, RatMat) else FLOAT

    @classmethod
    def basis(cls, registry: FactorRegistry, index: int, mode: str):
        if mode == EXACT:
            return cls(registry, RatMat.basis_column(registry.total_dim, index))
        v = np.zeros(registry.total_dim, dtype=np.complex128)
        v[index] = 1.0
        return cls(registry, v)

    @classmethod
    def from_product(cls, registry: FactorRegistry, columns):
        """Tensor the per-factor columns listed in registry order."""
        acc = None
        for col in columns:
            acc = col if acc is None else kron(acc, col)
        return cls(registry, acc if isinstance(acc, RatMat) else acc.reshape(-1))

    def scale(self, value):
        return LabeledVector(self.registry, mat_scale(self.data, value))

    def __add__(self, other):
        return LabeledVector(self.registry, self.data + other.data)

    def __sub__(self, other):
        return LabeledVector(self.registry, self.data - other.data)

    def is_zero(self, tol: float = ABS_TOL) -> bool:
        if isinstance(self.data, RatMat):
            return self.data.is_zero()
        return bool(np.all(np.abs(self.data) <= tol))

    def max_dev(self, other: "LabeledVector") -> float:
        diff = self.data - other.data
        if isinstance(diff, RatMat):
            return diff.max_abs()
        return float(np.max(np.abs(diff))) if diff.size else 0.0

    def norm(self) -> float:
        d = self.data.to_complex() if isinstance(self.data, RatMat) else self.data
        return float(np.linalg.norm(d))

    def to_float(self) -> "LabeledVector":
        if isinstance(self.data, RatMat):
            return LabeledVector(self.registry, self.data.to_complex().reshape(-1))
        return self

    def contract_slots(self, labels, handler) -> "LabeledVector":
        """Contract the named slots against ``handler``.

        ``handler(indices, sub)`` receives the per-slot basis indices and the
        sub-vector on the remaining registry (same matrix type as the data),
        and returns the contribution to accumulate (same shape as ``sub``).
        """
        reg = self.registry
        labels = [labels] if isinstance(labels, str) else list(labels)
        positions = [reg.position(s) for s in labels]
        dims = reg.dims
        rest = reg.drop(labels)
        rest_positions = [i for i in range(len(dims)) if i not in positions]

        def pieces(arr):
            t = arr.reshape(dims)
            t = np.transpose(t, positions + rest_positions)
            return t.reshape([dims[p] for p in positions] + [rest.total_dim])

        import itertools
        acc = None
        if isinstance(self.data, RatMat):
            t_re = pieces(self.data.re.reshape(-1))
            t_im = None if self.data.im is None else pieces(self.data.im.reshape(-1))
            for idx in itertools.product(*[range(dims[p]) for p in positions]):
                sub = RatMat(t_re[idx].reshape(-1, 1),
                             None if t_im is None else t_im[idx].reshape(-1, 1),
                             self.data.den)
                term = handler(idx, sub)
                if term is None:
                    continue
                acc = term if acc is None else acc + term
            if acc is None:
                acc = RatMat.zeros(rest.total_dim, 1)
            return LabeledVector(rest, acc)
        t = pieces(self.data)
        for idx in itertools.product(*[range(dims[p]) for p in positions]):
            term = handler(idx, t[idx])
            if term is None:
                continue
            acc = term if acc is None else acc + term
        if acc is None:
            acc = np.zeros(rest.total_dim, dtype=np.complex128)
        return LabeledVector(rest, acc)
