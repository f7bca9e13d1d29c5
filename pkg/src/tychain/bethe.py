"""Closed-form transfer-matrix eigenvalues, Bethe equations and root solver.

The eigenvalue is assembled from factored weight functions, so residues at
candidate roots come out in closed form by cancellation.  The solver is a
damped Newton iteration on the residuals of the printed equations (never the
log form), with deterministic seeded multistarts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chainops import validate_top_roots
from .reps import ChainSpec, weight_series
from .scalars import FLOAT, QC, scalar_one
from .weights import WeightFunction, sum_eval, sum_residue


@dataclass(frozen=True)
class BetheRootSet:
    """Solved excitation parameters: top roots and one tuple per nested level."""
    top: tuple
    levels: tuple = ()
    residual_max: float = 0.0
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def m(self) -> int:
        return len(self.top)

    def all_roots(self):
        out = [("top", i, u) for i, u in enumerate(self.top)]
        for k, lvl in enumerate(self.levels):
            out.extend([(f"level{k + 1}", i, u) for i, u in enumerate(lvl)])
        return out

    def flat(self):
        vals = list(self.top)
        for lvl in self.levels:
            vals.extend(lvl)
        return vals


def roots_from_flat(chain_: ChainSpec, values) -> BetheRootSet:
    m = chain_.profile.m
    top = tuple(values[:m])
    levels = []
    pos = m
    for mk in chain_.profile.levels:
        levels.append(tuple(values[pos:pos + mk]))
        pos += mk
    return BetheRootSet(top, tuple(levels))


def p_weight(chain_: ChainSpec) -> WeightFunction:
    """p(v) = 1 +- 1/(2v + rho) in factored form."""
    rho = chain_.rho_scalar
    half = chain_.scalar(Fraction(1, 2))
    pm = chain_.scalar(chain_.sign_int)
    return WeightFunction.monomial_ratio(-(rho + pm) * half, -rho * half,
                                         chain_.mode)


def _dress(chain_: ChainSpec, k: int, roots: BetheRootSet) -> WeightFunction:
    """Nesting factors multiplying the k-th weight in the eigenvalue."""
    mode = chain_.mode
    one = scalar_one(mode)
    out = WeightFunction.one(mode)
    levels = roots.levels
    if k >= 2 and k - 2 < len(levels):
        for u in levels[k - 2]:
            out = out.times(WeightFunction.monomial_ratio(u + one, u, mode))
    if k - 1 < len(levels):
        for u in levels[k - 1]:
            out = out.times(WeightFunction.monomial_ratio(u - one, u, mode))
    return out


def gamma_terms(chain_: ChainSpec, roots: BetheRootSet):
    """The n factored summands of the nested eigenvalue Gamma(v)."""
    return [weight_series(chain_, k, "nested", roots.top).times(
        _dress(chain_, k, roots)) for k in range(1, chain_.n + 1)]


def lambda_terms(chain_: ChainSpec, roots: BetheRootSet):
    """The 2n factored summands of the full eigenvalue Lambda(v)."""
    rho = chain_.rho_scalar
    p_wf = p_weight(chain_)
    half = [p_wf.times(t) for t in gamma_terms(chain_, roots)]
    return half + [t.reflect(rho) for t in half]


def gamma_full(chain_: ChainSpec, roots: BetheRootSet, v):
    """Gamma(v; roots), the eigenvalue of the nested transfer matrix."""
    return sum_eval(gamma_terms(chain_, roots), v)


def lambda_full(chain_: ChainSpec, roots: BetheRootSet, v):
    """Lambda(v; roots) = p(v) Gamma(v) + p(-v-rho) Gamma(-v-rho)."""
    return sum_eval(lambda_terms(chain_, roots), v)


class EigenvalueFunction:
    """Callable closed-form eigenvalue Lambda(v) with its factored summands."""

    def __init__(self, chain_: ChainSpec, roots: BetheRootSet):
        self.chain = chain_
        self.roots = roots
        self.terms = lambda_terms(chain_, roots)

    def __call__(self, v):
        return sum_eval(self.terms, v)

    def gamma(self, v):
        return gamma_full(self.chain, self.roots, v)

    def residue_at(self, point):
        return sum_residue(self.terms, point)


def gln_eigenvalue(weights, level_roots, v, mode: str):
    """Eigenvalue of a periodic one-row system from its weight functions.

    ``weights`` lists the n weight functions; ``level_roots`` the tuples of
    roots for levels 1..n-1.
    """
    return sum_eval(gln_gamma_terms(weights, level_roots, mode), v)


def gln_gamma_terms(weights, level_roots, mode: str):
    one = scalar_one(mode)
    n = len(weights)
    terms = []
    for k in range(1, n + 1):
        t = weights[k - 1]
        if k >= 2 and k - 2 < len(level_roots):
            for u in level_roots[k - 2]:
                t = t.times(WeightFunction.monomial_ratio(u + one, u, mode))
        if k - 1 < len(level_roots):
            for u in level_roots[k - 1]:
                t = t.times(WeightFunction.monomial_ratio(u - one, u, mode))
        terms.append(t)
    return terms


def gln_equation_factors(weights, level_roots, mode: str):
    """Factor lists of the periodic-system Bethe equations."""
    one = scalar_one(mode)
    n = len(weights)
    eqs = []
    for k in range(1, n):
        mk = level_roots[k - 1]
        for j, x in enumerate(mk):
            wk = weights[k - 1].cancelled()
            wk1 = weights[k].cancelled()
            ln_ = [wk.prefactor] + \
                [x - z for (z, m) in wk.zeros for _ in range(m)] + \
                [x - p for (p, m) in wk1.poles for _ in range(m)]
            ld_ = [wk1.prefactor] + \
                [x - p for (p, m) in wk.poles for _ in range(m)] + \
                [x - z for (z, m) in wk1.zeros for _ in range(m)]
            rn_, rd_ = [], []
            if k >= 2:
                for u in level_roots[k - 2]:
                    rn_.append(x - u)
                    rd_.append(x - u - one)
            for i, u in enumerate(mk):
                if i != j:
                    rn_.append(x - u - one)
                    rd_.append(x - u + one)
            if k < n - 1:
                for u in level_roots[k]:
                    rn_.append(x - u + one)
                    rd_.append(x - u)
            eqs.append((_cancel_pairs(ln_, ld_), _cancel_pairs(rn_, rd_)))
    return eqs


def gln_residuals(weights, level_roots, mode: str):
    """LHS - RHS of the periodic-system Bethe equations, one per root."""
    one = scalar_one(mode)
    out = []
    for (lnum, lden), (rnum, rden) in gln_equation_factors(weights,
                                                           level_roots, mode):
        out.append(_prod(lnum, one) / _prod(lden, one) -
                   _prod(rnum, one) / _prod(rden, one))
    return out


def gln_solver_residuals(weights, level_roots, mode: str):
    """Denominator-cleared residuals of the periodic-system equations."""
    one = scalar_one(mode)
    out = []
    for (lnum, lden), (rnum, rden) in gln_equation_factors(weights,
                                                           level_roots, mode):
        out.append(_prod(lnum, one) * _prod(rden, one) -
                   _prod(rnum, one) * _prod(lden, one))
    return out


def _same_scalar(a, b) -> bool:
    d = a - b
    if isinstance(d, QC):
        return d.is_zero()
    return abs(complex(d)) <= 1e-11 * max(1.0, abs(complex(a)),
                                          abs(complex(b)))


def _equation_factors(chain_: ChainSpec, roots: BetheRootSet):
    """Per equation: (lhs_num, lhs_den, rhs_num, rhs_den) factor lists.

    Identical factors occurring as both a numerator and a denominator of the
    same side are cancelled, so the printed equations stay usable at their
    removable singularities.
    """
    mode = chain_.mode
    one = scalar_one(mode)
    rho = chain_.rho_scalar
    pm = chain_.sign_int
    half = chain_.scalar(Fraction(1, 2))
    mu_n = chain_.scalar(chain_.boundary.weight[chain_.n - 1])
    lastlvl = roots.levels[-1] if roots.levels else ()
    eqs = []
    for k, u in enumerate(roots.top):
        ln_, ld_, rn_, rd_ = [], [], [], []
        ln_ += [u + (rho - one) * half, u + (rho - pm) * half + mu_n]
        ld_ += [u + (rho + one) * half, u + (rho + pm) * half - mu_n]
        for i, w in enumerate(roots.top):
            if i != k:
                ln_ += [u - w - one, u + w + rho - one]
                ld_ += [u - w + one, u + w + rho + one]
        for s in chain_.sites:
            c = chain_.scalar(s.shift)
            lam_n = chain_.scalar(s.weight[chain_.n - 1])
            lam_n1 = chain_.scalar(s.weight[chain_.n])
            rn_ += [u - c - lam_n, u + rho + c + lam_n1]
            rd_ += [u - c - lam_n1, u + rho + c + lam_n]
        for w in lastlvl:
            rn_ += [u + rho + w, u - w - one]
            rd_ += [u + rho + w + one, u - w]
        eqs.append((_cancel_pairs(ln_, ld_), _cancel_pairs(rn_, rd_)))
    nested_weights = [weight_series(chain_, k, "nested", roots.top)
                      for k in range(1, chain_.n + 1)]
    eqs.extend(gln_equation_factors(nested_weights, list(roots.levels), mode))
    return eqs


def _cancel_pairs(nums, dens):
    nums = list(nums)
    dens_out = []
    for d in dens:
        hit = next((i for i, nu in enumerate(nums) if _same_scalar(nu, d)),
                   None)
        if hit is None:
            dens_out.append(d)
        else:
            nums.pop(hit)
    return (nums, dens_out)


def _prod(values, one):
    out = one
    for v in values:
        out = out * v
    return out


def bethe_residuals(chain_: ChainSpec, roots: BetheRootSet):
    """LHS - RHS of the printed Bethe equations, top level first.

    A genuine pole collision in a denominator yields an inf marker rather
    than a silent value.
    """
    one = scalar_one(chain_.mode)
    out = []
    for (lnum, lden), (rnum, rden) in _equation_factors(chain_, roots):
        ld = _prod(lden, one)
        rd = _prod(rden, one)
        bad = (ld.is_zero() if isinstance(ld, QC) else complex(ld) == 0) or \
            (rd.is_zero() if isinstance(rd, QC) else complex(rd) == 0)
        if bad:
            out.append(complex("inf"))
            continue
        out.append(_prod(lnum, one) / ld - _prod(rnum, one) / rd)
    return out


def solver_residuals(chain_: ChainSpec, roots: BetheRootSet):
    """Denominator-cleared (polynomial) residuals with the same root set.

    Newton iterates on these: the printed residuals also vanish at infinity,
    which would otherwise attract the iteration.
    """
    one = scalar_one(chain_.mode)
    out = []
    for (lnum, lden), (rnum, rden) in _equation_factors(chain_, roots):
        out.append(_prod(lnum, one) * _prod(rden, one) -
                   _prod(rnum, one) * _prod(lden, one))
    return out


def residue_lambda(chain_: ChainSpec, roots: BetheRootSet, at):
    """Closed-form residue of Lambda at the named root.

    ``at`` is either an index into the top roots or a pair (level, index)
    with 1-based level.
    """
    if roots.m == 0 and not any(roots.levels):
        raise ValueError("no residues: the eigenvalue has no root poles")
    if isinstance(at, tuple):
        level, idx = at
        point = roots.levels[level - 1][idx]
    else:
        point = roots.top[at]
    return sum_residue(lambda_terms(chain_, roots), point)


def solve_gln_bethe(weights, counts, strategy: dict = None):
    """Roots of a periodic one-row system with the given weight functions.

    ``counts`` lists the number of roots per level (length n-1).  Returns
    deduplicated level tuples with their residual max-norms.
    """
    strategy = dict(strategy or {})
    seed = int(strategy.get("seed", 99))
    count = int(strategy.get("count", 48))
    box = strategy.get("box", (-5.0, 5.0, -3.0, 3.0))
    tol = float(strategy.get("tol", 1e-12))
    total = sum(counts)
    if total == 0:
        return [((), 0.0)]
    rng = np.random.default_rng(seed)

    def split(x):
        out = []
        pos = 0
        for c in counts:
            out.append(tuple(x[pos:pos + c]))
            pos += c
        return out

    def fvec(x, cleared=True):
        try:
            res = (gln_solver_residuals if cleared else gln_residuals)(
                weights, split(x), FLOAT)
            return np.array([complex(r) for r in res])
        except ZeroDivisionError:
            return None

    found = []
    for _ in range(count):
        x = rng.uniform(box[0], box[1], total) + \
            1j * rng.uniform(box[2], box[3], total)
        f = fvec(x)
        if f is None:
            continue
        ok = False
        for _ in range(60):
            if np.max(np.abs(x)) > 60.0:
                break
            fn = _max_norm(f)
            if fn < min(tol, 1e-13):
                ok = True
                break
            jac = np.zeros((total, total), dtype=complex)
            h = 1e-7
            bad = False
            for j in range(total):
                xp = x.copy()
                xp[j] += h
                fp = fvec(xp)
                if fp is None:
                    bad = True
                    break
                jac[:, j] = (fp - f) / h
            if bad:
                break
            try:
                step = np.linalg.solve(jac, -f)
            except np.linalg.LinAlgError:
                break
            t = 1.0
            moved = False
            for _ in range(30):
                fx = fvec(x + t * step)
                if fx is not None and _max_norm(fx) < fn:
                    x = x + t * step
                    f = fx
                    moved = True
                    break
                t /= 2
            if not moved:
                break
        if not ok:
            continue
        lv = split(x)
        if any(abs(a - b) < 1e-7 for part in lv
               for i, a in enumerate(part) for b in part[i + 1:]):
            continue
        printed = fvec(x, cleared=False)
        if printed is None or _max_norm(printed) > tol:
            continue
        xc = np.array([z for part in lv
                       for z in sorted(part, key=lambda t: (round(t.real, 9),
                                                            round(t.imag, 9)))])
        if any(np.max(np.abs(xc - y)) < 1e-8 for y, _ in found):
            continue
        found.append((xc, _max_norm(printed)))
    found.sort(key=lambda pair: tuple((round(z.real, 9), round(z.imag, 9))
                                      for z in pair[0]))
    return [(tuple(split(x)), fn) for x, fn in found]


# -- solver ------------------------------------------------------------------

def _as_float_chain(chain_: ChainSpec) -> ChainSpec:
    return chain_ if chain_.mode == FLOAT else chain_.with_mode(FLOAT)


def _residual_vector(chain_: ChainSpec, x: np.ndarray, cleared: bool = True):
    try:
        roots = roots_from_flat(chain_, [complex(z) for z in x])
        res = solver_residuals(chain_, roots) if cleared else \
            bethe_residuals(chain_, roots)
        return np.array([complex(r) for r in res])
    except ZeroDivisionError:
        return None


def _max_norm(v) -> float:
    return float(np.max(np.abs(v))) if v is not None and len(v) else 0.0


def _newton(chain_: ChainSpec, x0: np.ndarray, tol: float = 1e-12,
            maxiter: int = 60, bound: float = 60.0):
    """Damped complex Newton iteration; returns (x, residual_max) or None.

    Iterates that wander past ``bound`` are abandoned: the residuals of the
    rational equations also vanish at infinity, which is not a root.
    """
    x = x0.astype(np.complex128)
    f = _residual_vector(chain_, x)
    if f is None:
        return None
    for _ in range(maxiter):
        if np.max(np.abs(x)) > bound:
            return None
        fn = _max_norm(f)
        if fn < tol:
            return x, fn
        k = len(x)
        jac = np.zeros((k, k), dtype=np.complex128)
        h = 1e-7
        for j in range(k):
            xp = x.copy()
            xp[j] += h
            xm = x.copy()
            xm[j] -= h
            fp = _residual_vector(chain_, xp)
            fm = _residual_vector(chain_, xm)
            if fp is None or fm is None:
                return None
            jac[:, j] = (fp - fm) / (2 * h)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        accepted = False
        for _ in range(30):
            fx = _residual_vector(chain_, x + t * step)
            if fx is not None and _max_norm(fx) < fn:
                x = x + t * step
                f = fx
                accepted = True
                break
            t /= 2
        if not accepted:
            break
        if _max_norm(t * step) < tol and _max_norm(f) < tol:
            return x, _max_norm(f)
    fn = _max_norm(f)
    return (x, fn) if fn < tol else None


def _canonical(chain_: ChainSpec, x: np.ndarray) -> np.ndarray:
    roots = roots_from_flat(chain_, list(x))
    parts = [sorted(roots.top, key=lambda z: (round(z.real, 9),
                                              round(z.imag, 9)))]
    for lvl in roots.levels:
        parts.append(sorted(lvl, key=lambda z: (round(z.real, 9),
                                                round(z.imag, 9))))
    return np.array([z for part in parts for z in part], dtype=np.complex128)


def _admissible(chain_: ChainSpec, x: np.ndarray, margin: float = 1e-6
                ) -> bool:
    roots = roots_from_flat(chain_, list(x))
    try:
        validate_top_roots(chain_, [complex(u) for u in roots.top])
    except ValueError:
        return False
    for lvl in roots.levels:
        vals = [complex(u) for u in lvl]
        for i, a in enumerate(vals):
            for b in vals[i + 1:]:
                if abs(a - b) < margin:
                    return False
    return True


def solve_bethe(chain_: ChainSpec, strategy: dict = None):
    """Solve the Bethe equations numerically; deterministic under a seed.

    strategy: {"kind": "multistart", "count": int, "box": (re0, re1, im0,
    im1), "seed": int} or {"kind": "seeds", "starts": [[complex, ...], ...]}
    or {"kind": "continuation", "rho_from": value, "steps": int, plus
    multistart keys}.  Returns deduplicated BetheRootSet list sorted
    canonically; empty profile yields the single empty set.
    """
    fchain = _as_float_chain(chain_)
    nroots = fchain.profile.m + sum(fchain.profile.levels)
    if nroots == 0:
        return [BetheRootSet((), tuple(() for _ in fchain.profile.levels),
                             0.0, {"strategy": "trivial"})]
    strategy = dict(strategy or {})
    kind = strategy.get("kind", "multistart")
    tol = float(strategy.get("tol", 1e-12))
    diagnostics = {"failures": 0, "attempts": 0}
    starts = []
    if kind == "seeds":
        starts = [np.array(s, dtype=np.complex128)
                  for s in strategy["starts"]]
        solve_chain = fchain
    elif kind == "multistart":
        starts = _multistart_points(fchain, strategy)
        solve_chain = fchain
    elif kind == "continuation":
        return _solve_continuation(fchain, strategy)
    else:
        raise ValueError(f"unknown solver strategy {kind!r}")

    found = []
    for x0 in starts:
        diagnostics["attempts"] += 1
        got = _newton(solve_chain, x0, tol=min(tol, 1e-13))
        if got is None:
            diagnostics["failures"] += 1
            continue
        x, _ = got
        if not _admissible(solve_chain, x):
            continue
        printed = _residual_vector(solve_chain, x, cleared=False)
        if printed is None or _max_norm(printed) > tol:
            diagnostics["failures"] += 1
            continue
        fn = _max_norm(printed)
        xc = _canonical(solve_chain, x)
        if any(np.max(np.abs(xc - y)) < 1e-8 for y, _ in found):
            continue
        found.append((xc, fn))
    found.sort(key=lambda pair: tuple((round(z.real, 9), round(z.imag, 9))
                                      for z in pair[0]))
    out = []
    for x, fn in found:
        roots = roots_from_flat(fchain, list(x))
        out.append(BetheRootSet(roots.top, roots.levels, fn,
                                {"strategy": kind, **diagnostics}))
    return out


def _multistart_points(chain_: ChainSpec, strategy: dict):
    count = int(strategy.get("count", 64))
    box = strategy.get("box", (-5.0, 5.0, -3.0, 3.0))
    seed = int(strategy.get("seed", 1234))
    rng = np.random.default_rng(seed)
    nroots = chain_.profile.m + sum(chain_.profile.levels)
    poles = [complex(p) for p in chain_.pole_set()]
    pts = []
    guard = 0
    while len(pts) < count and guard < 50 * count:
        guard += 1
        re = rng.uniform(box[0], box[1], nroots)
        im = rng.uniform(box[2], box[3], nroots)
        x = re + 1j * im
        if any(abs(z - p) < 1e-3 or abs(z + p) < 1e-3 for z in x
               for p in poles):
            continue
        pts.append(x)
    return pts


def _solve_continuation(chain_: ChainSpec, strategy: dict):
    rho_from = complex(strategy.get("rho_from", 0))
    steps = int(strategy.get("steps", 8))
    rho_to = complex(chain_.rho_scalar)
    base = chain_.with_mode(FLOAT)
    start_chain = ChainSpec(base.sign, base.n, rho_from, base.sites,
                            base.boundary, base.profile, FLOAT, base.dim_cap)
    inner = {k: v for k, v in strategy.items()
             if k in ("count", "box", "seed", "tol")}
    inner["kind"] = "multistart"
    sols = solve_bethe(start_chain, inner)
    tol = float(strategy.get("tol", 1e-12))
    out = []
    for sol in sols:
        x = np.array(sol.flat(), dtype=np.complex128)
        ok = True
        for s in range(1, steps + 1):
            rho_s = rho_from + (rho_to - rho_from) * s / steps
            ch_s = ChainSpec(base.sign, base.n, rho_s, base.sites,
                             base.boundary, base.profile, FLOAT, base.dim_cap)
            got = _newton(ch_s, x, tol=min(tol, 1e-14))
            if got is None:
                ok = False
                break
            x = got[0]
        if not ok:
            continue
        xc = _canonical(base, x)
        if any(np.max(np.abs(xc - np.array(o.flat()))) < 1e-8 for o in out):
            continue
        printed = _residual_vector(base, xc, cleared=False)
        if printed is None or _max_norm(printed) > tol:
            continue
        roots = roots_from_flat(base, list(xc))
        out.append(BetheRootSet(roots.top, roots.levels, _max_norm(printed),
                                {"strategy": "continuation"}))
    return out
