"""Scalar arithmetic: exact complex rationals and float-mode helpers.

Every kernel in this package is generic over two scalar modes:

* ``"exact"``  -- complex numbers whose real and imaginary parts are
  arbitrary-precision rationals (:class:`QC`).  Equality is decidable and
  all algebraic identity checks run in this mode.
* ``"float"``  -- ordinary ``complex`` double precision, used by the
  numerical root solver and the brute-force spectrum oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

EXACT = "exact"
FLOAT = "float"

#: default tolerances for float-mode comparisons
ABS_TOL = 1e-12
REL_TOL = 1e-10


class QC:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- constructors -------------------------------------------------

    @staticmethod
    def coerce(x) -> "QC":
        if isinstance(x, QC):
            return x
        if isinstance(x, (int, Fraction)):
            return QC(x)
        if isinstance(x, str):
            return QC(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} to an exact scalar")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        o = QC.coerce(other)
        return QC(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QC.coerce(other)
        return QC(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QC.coerce(other) - self

    def __mul__(self, other):
        o = QC.coerce(other)
        return QC(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QC.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return QC((self.re * o.re + self.im * o.im) / d,
                  (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return QC.coerce(other) / self

    def __neg__(self):
        return QC(-self.re, -self.im)

    def conjugate(self) -> "QC":
        return QC(self.re, -self.im)

    # -- predicates ----------------------------------------------------

    def __eq__(self, other):
        try:
            o = QC.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- conversions ---------------------------------------------------

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        if self.im == 0:
            return f"QC({self.re})"
        return f"QC({self.re}, {self.im})"


Scalar = Union[QC, complex]


def as_scalar(x, mode: str):
    """Coerce ``x`` into the scalar type of the given mode.

    Exact mode accepts ints, Fractions, "p/q" strings and QC values;
    float mode accepts anything ``complex()`` accepts (QC included).
    """
    if mode == EXACT:
        return QC.coerce(x)
    if mode == FLOAT:
        if isinstance(x, QC):
            return complex(x)
        if isinstance(x, str):
            return complex(Fraction(x))
        return complex(x)
    raise ValueError(f"unknown scalar mode {mode!r}")


def scalar_zero(mode: str):
    return QC(0) if mode == EXACT else 0j


def scalar_one(mode: str):
    return QC(1) if mode == EXACT else 1 + 0j


def inv(x):
    """Multiplicative inverse in either mode."""
    if isinstance(x, QC):
        return QC(1) / x
    return 1.0 / x


def close(a, b, abs_tol: float = ABS_TOL, rel_tol: float = REL_TOL) -> bool:
    """Mode-aware comparison: exact equality for QC, abs+rel tolerance else."""
    if isinstance(a, QC) and isinstance(b, QC):
        return a == b
    a, b = complex(a), complex(b)
    return abs(a - b) <= abs_tol + rel_tol * max(abs(a), abs(b))


def rng_rational(rng, lo: int = -9, hi: int = 9, dens=(1, 2, 3, 5)) -> Fraction:
    """Small random rational from a ``random.Random`` source; deterministic."""
    num = rng.randint(lo, hi)
    den = rng.choice(dens)
    return Fraction(num, den)
