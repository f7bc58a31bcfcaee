"""Truncated L-infinity algebras, morphisms, modules and their twisting."""
from .coalgebra import co_leibniz_defects, grouplike_defect, morphism_defects, morphism_map, \
    partial_homotopy
from .relations import Residual, check_linfty, check_module, check_module_morphism, \
    check_morphism
from .structures import BasisElement, GradedBasis, LinftyError, LinftyModule, LinftyMorphism, \
    LinftySpace, MapTable, MCElement, ModuleMorphism
from .twisting import NotMaurerCartan, compose, gauge_direction, is_mc, mc_check, \
    mc_pushforward, mc_residual, pushforward_defect, tangency_residual, twist_algebra, \
    twist_module, twist_module_morphism, twist_morphism

__all__ = [
    "BasisElement", "GradedBasis", "LinftyError", "LinftyModule", "LinftyMorphism",
    "LinftySpace", "MapTable", "MCElement", "ModuleMorphism", "NotMaurerCartan", "Residual",
    "check_linfty", "check_module", "check_module_morphism", "check_morphism",
    "co_leibniz_defects", "compose", "gauge_direction", "grouplike_defect", "is_mc",
    "mc_check", "mc_pushforward", "mc_residual", "morphism_defects", "morphism_map",
    "partial_homotopy", "pushforward_defect", "tangency_residual", "twist_algebra",
    "twist_module", "twist_module_morphism", "twist_morphism",
]
