"""Exact computational algebra for theta groups over finite abelian groups:
cocycle central extensions and their Heisenberg normal forms, cubic and
biextension structures with their central-extension equivalences,
Schrodinger representations as monomial matrices, r-torsion Brauer
presentations with Hilbert-symbol calculus, and the classification of
homogeneous irreducible projective bundles as pairs (K, e).

All arithmetic is exact: scalars are exponents mod M, linear algebra runs
over the integers (Smith normal form) or a prime field.
"""
from __future__ import annotations

from ._kernels import backend_name
from .errors import (DegenerateFormError, IncompatibleTrivializationError,
                     InvalidArgumentError, MathematicalError, ThetaCubeError,
                     UnsupportedError)
from .fingroup import (Character, FinAbGroup, GroupElement, ModLinearSolver,
                       ProjectionMap, SubgroupData, SubgroupPresentation,
                       dual_group, group_new, int_inverse, is_prime,
                       quotient_presentation, smallest_prime_1mod,
                       smith_normal_form, subgroup_presentation,
                       subgroups_of_order)
from .pairing import (AlternatingForm, BilinearForm, ElementaryDivisorVector,
                      SymplecticBasis, elementary_divisors,
                      enumerate_alternating_forms, form_eval, is_nondegenerate,
                      radical, standard_form)
from .thetagroup import (CocycleExtension, LevelSubgroup, NormalizedExtension,
                         ThetaElement, coboundary_table, commutator_pairing,
                         enumerate_cocycles, ext_multiply, heisenberg,
                         is_nondegenerate_extension, lagrangian_subgroups,
                         normalize_extension)
from .cubic import (BiextensionStructure, CubicCheckResult, CubicCouple,
                    CubicStructure, biextension_to_cubic, central_from_cubic,
                    cubic_coboundary, cubic_from_central, cubic_to_biextension,
                    is_cubic, is_nondegenerate_couple, theta_of_cocycle)
from .schrodinger import (FunctionModule, MonomialMatrix, SchrodingerRep,
                          coefficient_matrix, invariants_dimension,
                          is_faithful_projective, is_irreducible,
                          matrix_coefficient_check, primitive_root_of_unity,
                          projective_rep, schrodinger, span_rank)
from .brauer import (AbelianVarietyData, BrauerPresentation, CyclicAlgebra,
                     ExplicitSplitting, TorsionChar, azumaya_check,
                     brauer_presentation, cyclic_algebra, explicit_splitting,
                     flatten_alternating, hilbert_symbol, principal_ns,
                     symbol_is_trivial, unflatten_alternating, wedge_pairs)
from .classification import (BundleDescriptor, SymplecticPair, brauer_classes,
                             bundle_to_brauer, enumerate_pairs, pair_to_bundle,
                             pair_to_cubic)

__version__ = "0.1.0"
