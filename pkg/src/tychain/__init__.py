"""Open spin chains with twisted-Yangian symmetry: exact monodromy and
transfer matrices on finite modules, algebraic identity audits, Bethe vectors
built two ways, numeric Bethe-equation solving, and brute-force spectrum
verification."""

__version__ = "0.1.0"

from .bethe import (BetheRootSet, EigenvalueFunction, bethe_residuals,
                    gamma_full, lambda_full, residue_lambda, solve_bethe)
from .chainops import (BlockSplit, CreationOperator, block_split, creation,
                       monodromy_S, monodromy_T, nested_monodromy,
                       nested_transfer, p_fn, residue_extract, transfer_tau)
from .identities import IDENTITIES, identity_params, verify_identity
from .oracle import exact_spectrum, match_spectrum, verify_eigenpair
from .reps import (BoundarySpec, ChainSpec, Profile, SiteSpec, chain,
                   build_quantum_space, vacuum_sector, weight_series)
from .scalars import EXACT, FLOAT, QC
from .tensor import (FactorRegistry, LabeledOperator, LabeledVector,
                     ORTHOGONAL, SYMPLECTIC, embed, kron)
from .vectors import (BetheVector, bethe_vector_composite, bethe_vector_trace,
                      closed_form_example, nested_bethe_vector)
