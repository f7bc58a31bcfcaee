from .carriers import (CARRIERS, ExtForm, FiberElement, HochChain, PolyDiffOp, PolyVecField,
                       chain, chain_from_polys, form, function, operator, polyvector,
                       vector_field)
from .hochschild import (apply, bullet, chain_action, chain_diff, cup, gerstenhaber, hkr_C,
                         hkr_V, hoch_diff, multiplication, pair, vector_to_operator)
from .poly import Poly, parse_poly
from .vectors import contract, de_rham, form_product, lie_derivative, schouten, wedge

__all__ = [
    "CARRIERS", "ExtForm", "FiberElement", "HochChain", "PolyDiffOp", "PolyVecField",
    "Poly", "parse_poly", "chain", "chain_from_polys", "form", "function", "operator",
    "polyvector", "vector_field", "apply", "bullet", "chain_action", "chain_diff", "cup",
    "gerstenhaber", "hkr_C", "hkr_V", "hoch_diff", "multiplication", "pair",
    "vector_to_operator", "contract", "de_rham", "form_product", "lie_derivative",
    "schouten", "wedge",
]
