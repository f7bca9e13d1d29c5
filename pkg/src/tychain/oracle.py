"""Brute-force ground truth: dense diagonalization of the transfer matrix,
simultaneous-eigenbasis refinement, eigenpair verification and spectrum
matching."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bethe import BetheRootSet, lambda_full
from .chainops import transfer_tau
from .reps import ChainSpec, build_quantum_space
from .scalars import EXACT, FLOAT
from .tensor import mat_to_float

FLOAT_DIM_CAP = 1024
RATIONAL_DIM_CAP = 128


@dataclass
class SpectrumReport:
    chain: ChainSpec
    samples: tuple
    eigenvalues: np.ndarray      # (dim, n_samples)
    basis: np.ndarray            # simultaneous eigenbasis columns
    commute_checked: bool
    matches: list = field(default_factory=list)
    coverage: float = 0.0

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def _clusters(values, tol):
    order = np.argsort(values.real * 1e6 + values.imag)
    groups = []
    for idx in order:
        if groups and abs(values[idx] - values[groups[-1][-1]]) < tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


def exact_spectrum(chain_: ChainSpec, v_samples, refine_tol: float = 1e-8
                   ) -> SpectrumReport:
    """Diagonalize tau at the first sample, refine degenerate blocks with the
    later samples, return all eigenvalue functions on the sample grid.

    In exact mode the commutation [tau(v1), tau(v2)] = 0 is checked
    bit-exactly before any numerics.
    """
    if len(v_samples) < 2:
        raise ValueError("need at least two sample points")
    space = build_quantum_space(chain_.with_mode(FLOAT))
    if space.dim > FLOAT_DIM_CAP:
        raise ValueError(f"dimension {space.dim} exceeds the oracle cap")
    commute_checked = False
    if chain_.mode == EXACT:
        t1 = transfer_tau(chain_, chain_.scalar(v_samples[0]))
        t2 = transfer_tau(chain_, chain_.scalar(v_samples[1]))
        if not (t1 @ t2 - t2 @ t1).is_zero():
            raise ValueError("transfer matrices do not commute exactly")
        commute_checked = True
    fchain = chain_.with_mode(FLOAT)
    taus = [mat_to_float(transfer_tau(fchain, complex(v)).data)
            for v in v_samples]
    w, basis = np.linalg.eig(taus[0])
    # refine clusters into a simultaneous eigenbasis using later samples
    for s in range(1, len(taus)):
        w_now = _diag_in_basis(taus[s - 1], basis)
        for group in _clusters(w_now, refine_tol):
            if len(group) == 1:
                continue
            cols = basis[:, group]
            local = np.linalg.lstsq(cols, taus[s] @ cols, rcond=None)[0]
            _, rot = np.linalg.eig(local)
            basis[:, group] = cols @ rot
    values = np.zeros((basis.shape[0], len(taus)), dtype=complex)
    for s, t in enumerate(taus):
        full = np.linalg.solve(basis, t @ basis)
        off = full - np.diag(np.diag(full))
        scale = max(1.0, float(np.max(np.abs(full))))
        if np.max(np.abs(off)) > 1e-6 * scale:
            raise ValueError("samples do not commute numerically; "
                             "simultaneous diagonalization failed")
        values[:, s] = np.diag(full)
    return SpectrumReport(chain_, tuple(complex(v) for v in v_samples),
                          values, basis, commute_checked)


def _diag_in_basis(t, basis):
    return np.diag(np.linalg.solve(basis, t @ basis))


def exact_charpoly(chain_: ChainSpec, v):
    """Factored characteristic polynomial of tau(v) over the rationals.

    Only for exact chains of modest dimension; the float path is the
    authoritative oracle beyond the cap.
    """
    if chain_.mode != EXACT:
        raise ValueError("characteristic polynomial path needs an exact chain")
    space = build_quantum_space(chain_)
    if space.dim > RATIONAL_DIM_CAP:
        raise ValueError(f"dimension {space.dim} exceeds the exact cap "
                         f"{RATIONAL_DIM_CAP}")
    import sympy
    tau = transfer_tau(chain_, chain_.scalar(v))
    rows = tau.data.tolist()
    mat = sympy.Matrix([[sympy.Rational(int(q.re.numerator),
                                        int(q.re.denominator))
                         for q in row] for row in rows])
    lam = sympy.symbols("lam")
    return sympy.factor_list(mat.charpoly(lam).as_expr())


def verify_eigenpair(chain_: ChainSpec, psi, roots: BetheRootSet, v_samples,
                     tol: float = 1e-9):
    """Relative residual of tau(v) psi = Lambda(v) psi at each sample.

    ``psi`` is a LabeledVector (or BetheVector) on the quantum factors.
    Returns (passed, worst_residual, per_sample list); zero input raises.
    """
    vec = psi.vector if hasattr(psi, "vector") else psi
    data = mat_to_float(vec.data).reshape(-1)
    nrm = float(np.linalg.norm(data))
    if nrm < 1e-14:
        raise ValueError("cannot verify a zero vector")
    fchain = chain_.with_mode(FLOAT)
    out = []
    for v in v_samples:
        tau = mat_to_float(transfer_tau(fchain, complex(v)).data)
        lam = complex(lambda_full(fchain, roots, complex(v)))
        resid = np.linalg.norm(tau @ data - lam * data) / \
            (np.linalg.norm(tau) * nrm)
        out.append(float(resid))
    worst = max(out)
    return worst <= tol, worst, out


def match_spectrum(report: SpectrumReport, candidates, tol: float = 1e-8):
    """Greedy max-norm matching of candidate eigenvalue functions.

    ``candidates`` lists (roots, values) with values sampled on the report
    grid, or (roots, None) to evaluate the closed form on the grid.  Returns
    the updated report with matches and a coverage fraction.
    """
    dim = report.dim
    used = set()
    matches = []
    fchain = report.chain.with_mode(FLOAT)
    for (roots, values) in candidates:
        if values is None:
            values = np.array([complex(lambda_full(fchain, roots, v))
                               for v in report.samples])
        best, best_dev = None, np.inf
        for r in range(dim):
            if r in used:
                continue
            dev = float(np.max(np.abs(report.eigenvalues[r] - values)))
            if dev < best_dev:
                best, best_dev = r, dev
        if best is not None and best_dev <= tol:
            used.add(best)
            matches.append((roots, best, best_dev))
        else:
            matches.append((roots, None, best_dev))
    report.matches = matches
    report.coverage = len(used) / dim if dim else 0.0
    return report
