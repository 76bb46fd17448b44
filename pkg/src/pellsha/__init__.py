"""Pell conics x^2 - D y^2 = 4 over Z: group law, narrow class groups of
binary quadratic forms, and the finite group of everywhere-locally-solvable
form classes measuring the failure of the Hasse principle.
"""

__version__ = "0.1.0"

from .arith import (CFExpansion, LocalPlace, PrimePower, REAL, cf_sqrt,
                    factorize, hilbert_symbol, is_prime, kronecker, sqrt_mod,
                    valuation)
from .qfield import (Discriminant, FractionalIdeal, NotFundamental,
                     PerfectSquare, QuadElement, SplittingType,
                     as_discriminant, form_to_ideal, fundamental_unit,
                     ideal_conjugate, ideal_inverse, ideal_mul, ideal_norm,
                     ideal_to_form, is_narrowly_principal, make_discriminant,
                     make_ideal, norm, splitting_type, unit_ideal)
from .bqf import (ClassGroup, DiscriminantMismatch, Form, FormClass,
                  class_group, compose, form_class, is_equivalent, is_reduced,
                  principal_form, reduce, reduction_cycle,
                  represents_globally, represents_over_qp, represents_over_zp,
                  squared_subgroup)
from .conic import (ConicPoint, HalvingFailure, NormOneElement, add,
                    from_norm_one, fundamental_point, identity, neg, on_curve,
                    scalar_mul, to_norm_one, torsion_points)
from .sha import (NoSplitGenerators, ShaReport, fundamental_discriminants,
                  hasse_failures, norm_one_representative, scan, sha_classes,
                  sha_order, verify_main_theorem)
from .oracle import (ModulusTooLarge, brute_equivalent, brute_local,
                     cyclic_module_test, naive_class_count)
