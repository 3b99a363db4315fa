"""Finite-dimensional Hom-structures: tables, law residuals, twists,
polarization, duality and formal deformations."""

from .constructions import (commutator_hlie, comorphism_residuals, depolarize, dualize, polarize,
                            post_compose, pre_compose, twist_algebra, twist_coalgebra)
from .deform import Deformation, check_deformation, quasi_classical_limit
from .io import load_structure, structure_to_json
from .laws import (BUNDLES, DUAL_BUNDLE, DUAL_LAW, LAWS, bundle_holds, check_bundle, check_law,
                   expand_laws, flexibility_criteria, hom_associator, hom_jacobian, residual_of)
from .tables import HomAlgebra, HomBialgebra, HomCoalgebra, LinMap, MultTable, Residual

__all__ = [
    "BUNDLES", "DUAL_BUNDLE", "DUAL_LAW", "LAWS", "Deformation", "HomAlgebra", "HomBialgebra",
    "HomCoalgebra", "LinMap", "MultTable", "Residual", "bundle_holds", "check_bundle",
    "check_deformation", "check_law", "commutator_hlie", "comorphism_residuals", "depolarize",
    "dualize", "expand_laws", "flexibility_criteria", "hom_associator", "hom_jacobian",
    "load_structure", "polarize", "post_compose", "pre_compose", "quasi_classical_limit",
    "residual_of", "structure_to_json", "twist_algebra", "twist_coalgebra",
]
