"""Dense matrices over exact complex rationals.

Entries are stored as numpy object arrays of Python integers over a single
positive denominator, so a matrix product is one (or four, when an imaginary
part is present) integer ``np.dot`` calls.  Python integers never overflow;
the denominator is re-normalised once it grows past a bit threshold.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .scalars import QC

_REDUCE_BITS = 128


def _int_array(shape):
    return np.zeros(shape, dtype=object)


def _gcd_reduce(arrays, den: int) -> int:
    """gcd of ``den`` with every entry of the given arrays; early exit at 1."""
    g = den
    for arr in arrays:
        if arr is None:
            continue
        for v in arr.flat:
            if v:
                g = math.gcd(g, v if v > 0 else -v)
                if g == 1:
                    return 1
    return g


class RatMat:
    """Rectangular matrix ``(re + i*im) / den`` with exact integer arrays."""

    __slots__ = ("re", "im", "den", "shape")

    def __init__(self, re, im, den: int):
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.re = re
        self.im = im
        self.den = den
        self.shape = re.shape

    # -- constructors --------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int) -> "RatMat":
        return RatMat(_int_array((rows, cols)), None, 1)

    @staticmethod
    def identity(n: int) -> "RatMat":
        re = _int_array((n, n))
        for i in range(n):
            re[i, i] = 1
        return RatMat(re, None, 1)

    @staticmethod
    def basis_column(dim: int, index: int) -> "RatMat":
        re = _int_array((dim, 1))
        re[index, 0] = 1
        return RatMat(re, None, 1)

    @staticmethod
    def from_entries(rows) -> "RatMat":
        """Build from a nested sequence of ints/Fractions/QC values."""
        vals = [[QC.coerce(v) if not isinstance(v, QC) else v for v in row]
                for row in rows]
        den = 1
        for row in vals:
            for v in row:
                den = den * v.re.denominator // math.gcd(den, v.re.denominator)
                den = den * v.im.denominator // math.gcd(den, v.im.denominator)
        r, c = len(vals), len(vals[0]) if vals else 0
        re = _int_array((r, c))
        need_im = any(v.im != 0 for row in vals for v in row)
        im = _int_array((r, c)) if need_im else None
        for i, row in enumerate(vals):
            for j, v in enumerate(row):
                re[i, j] = int(v.re * den)
                if need_im:
                    im[i, j] = int(v.im * den)
        return RatMat(re, im, den)

    @staticmethod
    def scalar(value, rows: int, cols: int | None = None) -> "RatMat":
        """value * identity (cols=None) or a 1x1 matrix when rows=cols=1."""
        v = QC.coerce(value)
        n = rows
        cols = n if cols is None else cols
        den = int(v.re.denominator * v.im.denominator //
                  math.gcd(v.re.denominator, v.im.denominator))
        re = _int_array((n, cols))
        im = _int_array((n, cols)) if v.im != 0 else None
        for i in range(min(n, cols)):
            re[i, i] = int(v.re * den)
            if im is not None:
                im[i, i] = int(v.im * den)
        return RatMat(re, im, den)

    # -- bookkeeping ---------------------------------------------------

    def copy(self) -> "RatMat":
        return RatMat(self.re.copy(),
                      None if self.im is None else self.im.copy(), self.den)

    def reduced(self) -> "RatMat":
        g = _gcd_reduce((self.re, self.im), self.den)
        if g == 1:
            return self
        re = self.re // g
        im = None if self.im is None else self.im // g
        return RatMat(re, im, self.den // g)

    def _maybe_reduce(self) -> "RatMat":
        if self.den.bit_length() > _REDUCE_BITS:
            return self.reduced()
        return self

    def entry(self, i: int, j: int) -> QC:
        re = Fraction(int(self.re[i, j]), self.den)
        im = Fraction(0) if self.im is None else Fraction(int(self.im[i, j]), self.den)
        return QC(re, im)

    def to_complex(self) -> np.ndarray:
        out = self.re.astype(np.complex128)
        if self.im is not None:
            out = out + 1j * self.im.astype(np.complex128)
        return out / self.den

    def tolist(self):
        return [[self.entry(i, j) for j in range(self.shape[1])]
                for i in range(self.shape[0])]

    # -- ring operations -----------------------------------------------

    def __matmul__(self, other: "RatMat") -> "RatMat":
        a, b = self, other
        re = np.dot(a.re, b.re)
        im = None
        if a.im is not None and b.im is not None:
            re = re - np.dot(a.im, b.im)
            im = np.dot(a.re, b.im) + np.dot(a.im, b.re)
        elif a.im is not None:
            im = np.dot(a.im, b.re)
        elif b.im is not None:
            im = np.dot(a.re, b.im)
        return RatMat(re, im, a.den * b.den)._maybe_reduce()

    def _aligned(self, other: "RatMat"):
        d = math.gcd(self.den, other.den)
        ka, kb = other.den // d, self.den // d
        return ka, kb, self.den * ka

    def __add__(self, other: "RatMat") -> "RatMat":
        ka, kb, den = self._aligned(other)
        re = self.re * ka + other.re * kb
        if self.im is None and other.im is None:
            im = None
        else:
            ia = self.im * ka if self.im is not None else 0
            ib = other.im * kb if other.im is not None else 0
            im = ia + ib
            if not isinstance(im, np.ndarray):
                im = None
        return RatMat(re, im, den)._maybe_reduce()

    def __sub__(self, other: "RatMat") -> "RatMat":
        return self + (-other)

    def __neg__(self) -> "RatMat":
        return RatMat(-self.re, None if self.im is None else -self.im, self.den)

    def scale(self, value) -> "RatMat":
        v = QC.coerce(value)
        dn = int(v.re.denominator * v.im.denominator //
                 math.gcd(v.re.denominator, v.im.denominator))
        nr, ni = int(v.re * dn), int(v.im * dn)
        re = self.re * nr
        im = None
        if ni != 0:
            im = self.re * ni
            if self.im is not None:
                re = re - self.im * ni
                im = im + self.im * nr
        elif self.im is not None:
            im = self.im * nr
        return RatMat(re, im, self.den * dn)._maybe_reduce()

    def kron(self, other: "RatMat") -> "RatMat":
        a, b = self, other
        re = np.kron(a.re, b.re)
        im = None
        if a.im is not None and b.im is not None:
            re = re - np.kron(a.im, b.im)
            im = np.kron(a.re, b.im) + np.kron(a.im, b.re)
        elif a.im is not None:
            im = np.kron(a.im, b.re)
        elif b.im is not None:
            im = np.kron(a.re, b.im)
        return RatMat(re, im, a.den * b.den)._maybe_reduce()

    def trace(self) -> QC:
        tr_re = sum(int(self.re[i, i]) for i in range(self.shape[0]))
        tr_im = 0 if self.im is None else sum(int(self.im[i, i])
                                              for i in range(self.shape[0]))
        return QC(Fraction(tr_re, self.den), Fraction(tr_im, self.den))

    def transpose(self) -> "RatMat":
        return RatMat(self.re.T.copy(),
                      None if self.im is None else self.im.T.copy(), self.den)

    def transform(self, f) -> "RatMat":
        """Apply an index-shuffling array map to both components."""
        return RatMat(f(self.re), None if self.im is None else f(self.im),
                      self.den)

    # -- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        if np.any(self.re != 0):
            return False
        return self.im is None or not np.any(self.im != 0)

    def __eq__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("RatMat is not hashable")

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.to_complex()))) if self.re.size else 0.0

    # -- stacking --------------------------------------------------------

    @staticmethod
    def vstack(mats) -> "RatMat":
        mats = list(mats)
        den = 1
        for m in mats:
            den = den * m.den // math.gcd(den, m.den)
        res = [m.re * (den // m.den) for m in mats]
        ims = [(m.im * (den // m.den)) if m.im is not None
               else np.zeros(m.shape, dtype=object) for m in mats]
        need_im = any(m.im is not None for m in mats)
        return RatMat(np.vstack(res), np.vstack(ims) if need_im else None, den)

    @staticmethod
    def hstack(mats) -> "RatMat":
        mats = list(mats)
        den = 1
        for m in mats:
            den = den * m.den // math.gcd(den, m.den)
        res = [m.re * (den // m.den) for m in mats]
        ims = [(m.im * (den // m.den)) if m.im is not None
               else np.zeros(m.shape, dtype=object) for m in mats]
        need_im = any(m.im is not None for m in mats)
        return RatMat(np.hstack(res), np.hstack(ims) if need_im else None, den)


def nullspace(mat: RatMat) -> RatMat:
    """Exact right null space, returned as a dim x k matrix of basis columns.

    Gaussian elimination over the field of complex rationals; pivots are
    chosen as the first nonzero entry in each column.
    """
    rows, cols = mat.shape
    a = [[mat.entry(i, j) for j in range(cols)] for i in range(rows)]
    pivot_col_of_row: list[int] = []
    r = 0
    for c in range(cols):
        p = None
        for i in range(r, rows):
            if not a[i][c].is_zero():
                p = i
                break
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv_piv = QC(1) / a[r][c]
        a[r] = [v * inv_piv for v in a[r]]
        for i in range(rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivot_col_of_row.append(c)
        r += 1
        if r == rows:
            break
    pivots = set(pivot_col_of_row)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [QC(0)] * cols
        v[fc] = QC(1)
        for i, pc in enumerate(pivot_col_of_row):
            v[pc] = -a[i][fc]
        basis.append(v)
    if not basis:
        return RatMat.zeros(cols, 0)
    return RatMat.from_entries([[basis[k][i] for k in range(len(basis))]
                                for i in range(cols)])


def column_in_span(col: RatMat, basis: RatMat) -> bool:
    """Exact membership test: is ``col`` a linear combination of basis columns."""
    if basis.shape[1] == 0:
        return col.is_zero()
    aug = RatMat.hstack([basis, col])
    return rank(aug) == rank(basis)


def rank(mat: RatMat) -> int:
    rows, cols = mat.shape
    a = [[mat.entry(i, j) for j in range(cols)] for i in range(rows)]
    rk = 0
    for c in range(cols):
        p = None
        for i in range(rk, rows):
            if not a[i][c].is_zero():
                p = i
                break
        if p is None:
            continue
        a[rk], a[p] = a[p], a[rk]
        inv_piv = QC(1) / a[rk][c]
        a[rk] = [v * inv_piv for v in a[rk]]
        for i in range(rk + 1, rows):
            if not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[rk])]
        rk += 1
        if rk == rows:
            break
    return rk
