"""Univariate rational functions kept in factored form.

A weight function is ``prefactor * prod (v - z_i) / prod (v - p_j)`` with
explicit zero and pole lists.  Keeping the factors explicit makes residues at
simple poles available in closed form by cancellation, with no numerical
limits involved.
"""

from __future__ import annotations

from .scalars import QC, scalar_one


def _same(a, b) -> bool:
    if isinstance(a, QC) and isinstance(b, QC):
        return a == b
    za, zb = complex(a), complex(b)
    scale = max(1.0, abs(za), abs(zb))
    return abs(za - zb) <= 1e-11 * scale


class WeightFunction:
    """Factored scalar rational function of one variable."""

    def __init__(self, prefactor, zeros=(), poles=()):
        self.prefactor = prefactor
        self.zeros = list(zeros)
        self.poles = list(poles)

    @staticmethod
    def one(mode: str) -> "WeightFunction":
        return WeightFunction(scalar_one(mode))

    @staticmethod
    def monomial_ratio(zero, pole, mode: str) -> "WeightFunction":
        """(v - zero) / (v - pole)."""
        return WeightFunction(scalar_one(mode), [(zero, 1)], [(pole, 1)])

    def times(self, other: "WeightFunction") -> "WeightFunction":
        return WeightFunction(self.prefactor * other.prefactor,
                              self.zeros + other.zeros,
                              self.poles + other.poles).cancelled()

    def scaled(self, s) -> "WeightFunction":
        return WeightFunction(self.prefactor * s, list(self.zeros),
                              list(self.poles))

    def cancelled(self) -> "WeightFunction":
        """Cancel common zero/pole locations (multiplicity-aware)."""
        zeros = list(self.zeros)
        poles = []
        for (p, mp) in self.poles:
            for k, (z, mz) in enumerate(zeros):
                if _same(p, z):
                    c = min(mp, mz)
                    mp -= c
                    if mz - c:
                        zeros[k] = (z, mz - c)
                    else:
                        zeros.pop(k)
                    break
            if mp:
                poles.append((p, mp))
        return WeightFunction(self.prefactor, zeros, poles)

    def reflect(self, rho) -> "WeightFunction":
        """The function v -> f(-v - rho), again in factored form."""
        zeros = [(-rho - z, m) for (z, m) in self.zeros]
        poles = [(-rho - p, m) for (p, m) in self.poles]
        swing = sum(m for _, m in self.zeros) - sum(m for _, m in self.poles)
        pre = self.prefactor if swing % 2 == 0 else -self.prefactor
        return WeightFunction(pre, zeros, poles)

    def pole_order(self, at) -> int:
        f = self.cancelled()
        return sum(m for (p, m) in f.poles if _same(p, at))

    def __call__(self, v):
        out = self.prefactor
        for (z, m) in self.zeros:
            for _ in range(m):
                out = out * (v - z)
        for (p, m) in self.poles:
            d = v - p
            if (d.is_zero() if isinstance(d, QC) else complex(d) == 0):
                raise ZeroDivisionError(f"evaluation at pole {p!r}")
            for _ in range(m):
                out = out / d
        return out

    def residue_at(self, at):
        """Residue at a simple pole; zero if the function is regular there."""
        f = self.cancelled()
        order = f.pole_order(at)
        if order == 0:
            return self.prefactor * 0
        if order > 1:
            raise ValueError(f"pole at {at!r} is not simple (order {order})")
        out = f.prefactor
        for (z, m) in f.zeros:
            for _ in range(m):
                out = out * (at - z)
        for (p, m) in f.poles:
            if _same(p, at):
                continue
            for _ in range(m):
                out = out / (at - p)
        return out

    def poles_list(self):
        return [p for (p, _) in self.cancelled().poles]

    def __repr__(self):
        return (f"WeightFunction({self.prefactor!r}, zeros={self.zeros!r}, "
                f"poles={self.poles!r})")


def sum_residue(terms, at):
    """Residue of a finite sum of weight functions at a simple pole."""
    out = None
    for t in terms:
        r = t.residue_at(at)
        out = r if out is None else out + r
    return out


def sum_eval(terms, v):
    out = None
    for t in terms:
        val = t(v)
        out = val if out is None else out + val
    return out
