"""Exact-arithmetic dimension certificates for Kronecker product models.

The package certifies model dimensions two independent ways: exact generic
Jacobian rank over the rationals (`dimension`) and tropical lower bounds from
explicitly constructed slicings (`tropical`), with the Hamming-ball code
combinatorics the constructions need (`codes`).  Everything runs on exact
rational arithmetic (`exactla`); there is no floating point anywhere.
"""

from .errors import (ArgumentError, KrondimError, LabelError, PreconditionError,
                     ResourceBudgetError, UnsupportedSpecError)
from .exactla import (QMatrix, Rational, StrictFeasibilityProblem, khatri_rao,
                      kronecker, rank, rref, strict_feasible)
from .hierarchical import (HierarchicalSpec, InteractionSet, StateSpace,
                           build_signed_suffstat, build_suffstat,
                           check_full_rank_ball, dim_V, indicator_expansion,
                           k_interaction, lambda_ball)
from .dimension import (FactorSpec, KroneckerModelSpec, RankCertificate,
                        expected_dim, generic_dim, jacobian_eval,
                        mixture_bound_check, mixture_spec, rbm_spec)
from .tropical import (InferenceFunction, Slicing, TropicalCertificate,
                       brute_force_tropical_dim, certify, construct_ball_slicing,
                       construct_hadamard_slicings, construct_rref_slicing,
                       halfspace_realizer, infer, make_generic, realizable,
                       stack_unit_realizers, stacked_identity, tropical_matrix,
                       truncate_slicing, unit_halfspace_realizer)
from .codes import (Code, brute_force_max_code, greedy_cover, greedy_pack,
                    gv_bound, gv_prime_power_bound, nested_ball_pack,
                    sphere_packing_bound)

__version__ = "0.1.0"
