"""Star products, gauge equivalence, twisted Hochschild homology and traces."""
from .homology import Complex, compare, forms_complex, to_csv, twisted_chain_complex
from .star import (GaugeElement, PoissonStructure, QuantizeError, StarProduct,
                   antisymmetric_part, associativity_residual, compose_gauge, constant_poisson,
                   first_order, gauge_transform, identity_operator, inverse_gauge, is_mc,
                   laplacian_gauge, mc_residual, moyal_star, symmetric_part)
from .trace import Functional, criterion_agrees, top_coefficient, trace_check

__all__ = [
    "Complex", "compare", "forms_complex", "to_csv", "twisted_chain_complex", "GaugeElement",
    "PoissonStructure", "QuantizeError", "StarProduct", "antisymmetric_part",
    "associativity_residual", "compose_gauge", "constant_poisson", "first_order",
    "gauge_transform", "identity_operator", "inverse_gauge", "is_mc", "laplacian_gauge",
    "mc_residual", "moyal_star", "symmetric_part", "Functional", "criterion_agrees",
    "top_coefficient", "trace_check",
]
