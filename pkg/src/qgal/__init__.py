"""Galois objects for finite quantum groups.

Finite-dimensional Hopf *-algebras with a Haar state, their multiplicative
unitaries and duals, unitary 2-cocycles on the dual, Galois objects (ergodic
coactions with a unitary Galois map), the reflected quantum group built from
a Galois object, and projective corepresentations.
"""

from .cocycle import (TwoCocycle, check_cocycle, dihedral_twist, trivial_cocycle,
                      twist_coproduct, weyl_cocycle)
from .examples import (FiniteGroup, cyclic, dihedral, direct_product, function_algebra,
                       group_algebra, symmetric)
from .fqg import FiniteQuantumGroup, dual, multiplicative_unitary, regular, validate
from .galois import (Coaction, GaloisObject, cocycle_crossed_product, coaction_from_operators,
                     commutation_suite, crossed_product, modular_suite, trivial_galois_object,
                     weyl_coaction)
from .projrep import (ProjectiveCorep, TypeICoaction, check_corep, extract_galois,
                      induced_coaction, outer_equivalence, regular_corep)
from .reflection import reflect, twisted_multiplicative_unitary
from .report import Check, Report

__version__ = "0.1.0"

__all__ = [
    "Check", "Coaction", "FiniteGroup", "FiniteQuantumGroup", "GaloisObject",
    "ProjectiveCorep", "Report", "TwoCocycle", "TypeICoaction", "check_cocycle",
    "check_corep", "cocycle_crossed_product", "coaction_from_operators", "commutation_suite",
    "crossed_product", "cyclic", "dihedral", "dihedral_twist", "direct_product", "dual",
    "extract_galois", "function_algebra", "group_algebra", "induced_coaction",
    "modular_suite", "multiplicative_unitary", "outer_equivalence", "reflect", "regular",
    "regular_corep", "symmetric", "trivial_cocycle", "trivial_galois_object",
    "twist_coproduct", "twisted_multiplicative_unitary", "validate", "weyl_cocycle",
    "weyl_coaction",
]
