from fractions import Fraction

import numpy as np
import pytest

from tychain.bethe import BetheRootSet, lambda_full, solve_bethe
from tychain.oracle import (exact_charpoly, exact_spectrum, match_spectrum,
                            verify_eigenpair)
from tychain.reps import chain
from tychain.scalars import FLOAT, QC
from tychain.tensor import ORTHOGONAL
from tychain.vectors import bethe_vector_composite


@pytest.fixture(scope="module")
def desk():
    return chain(ORTHOGONAL, 1, 0, sites=[0, Fraction(1, 3)],
                 profile=(1, ()), mode=FLOAT)


def test_trivial_chain_spectrum():
    ch = chain(ORTHOGONAL, 2, 1, mode=FLOAT)
    rep = exact_spectrum(ch, [2.0, 3.0])
    assert rep.dim == 1
    assert np.allclose(rep.eigenvalues, 4.0)


def test_exact_commute_precheck(chain_n1):
    rep = exact_spectrum(chain_n1, [QC(2), QC(7), QC(3)])
    assert rep.commute_checked
    assert rep.dim == 2


def test_vacuum_in_spectrum(desk):
    rep = exact_spectrum(desk, [2.31, 3.07, -4.75])
    rs = BetheRootSet((), ())
    lam = np.array([complex(lambda_full(desk, rs, v)) for v in rep.samples])
    devs = [np.max(np.abs(rep.eigenvalues[r] - lam)) for r in range(rep.dim)]
    assert min(devs) < 1e-10


def test_crossing_of_oracle_eigenvalues(desk):
    rho = complex(desk.rho_scalar)
    v = 1.73
    rep = exact_spectrum(desk, [v, -v - rho])
    a = np.sort_complex(np.round(rep.eigenvalues[:, 0], 9))
    b = np.sort_complex(np.round(rep.eigenvalues[:, 1], 9))
    assert np.max(np.abs(a - b)) < 1e-10


def test_verify_eigenpair_and_controls(desk):
    sols = solve_bethe(desk, {"kind": "multistart", "count": 48, "seed": 7})
    assert sols
    rs = sols[0]
    psi = bethe_vector_composite(desk, rs)
    ok, worst, _ = verify_eigenpair(desk, psi, rs,
                                    [2.1, -3.3, 1.9, 4.4, -1.7], tol=1e-9)
    assert ok, worst
    # negative control: perturbed root fails decisively
    off = BetheRootSet((rs.top[0] + 0.1,), ())
    psi_off = bethe_vector_composite(desk, off)
    ok2, worst2, _ = verify_eigenpair(desk, psi_off, off,
                                      [2.1, -3.3, 1.9], tol=1e-9)
    assert not ok2 and worst2 > 1e-3


def test_verify_rejects_zero_vector(desk):
    from tychain.tensor import LabeledVector
    from tychain.reps import quantum_registry
    reg = quantum_registry(desk)
    zero = LabeledVector(reg, np.zeros(reg.total_dim, dtype=complex))
    with pytest.raises(ValueError):
        verify_eigenpair(desk, zero, BetheRootSet((), ()), [2.0])


def test_match_spectrum_coverage(desk):
    rep = exact_spectrum(desk, [2.31, 3.07, -4.75, 1.62])
    sols = solve_bethe(desk, {"kind": "multistart", "count": 48, "seed": 7})
    cands = [(BetheRootSet((), ()), None)] + [(s, None) for s in sols]
    rep = match_spectrum(rep, cands, tol=1e-8)
    # vacuum plus at least one excitation matched; reflected-root duplicates
    # share an eigenvalue, so not every candidate can claim a fresh one
    assert rep.coverage >= 2 / rep.dim - 1e-12
    assert rep.matches[0][1] is not None
    for (roots, _, _) in rep.matches:
        lam = np.array([complex(lambda_full(desk, roots, v))
                        for v in rep.samples])
        best = min(np.max(np.abs(rep.eigenvalues[r] - lam))
                   for r in range(rep.dim))
        assert best < 1e-8
    empty = match_spectrum(exact_spectrum(desk, [2.31, 3.07]), [])
    assert empty.coverage == 0.0


def test_exact_charpoly_small(chain_n1):
    factors = exact_charpoly(chain_n1, QC(3))
    # product of the factors reproduces a degree-2 polynomial
    import sympy
    lead, terms = factors
    deg = sum(p.as_poly().degree() * m for p, m in terms)
    assert deg == 2
