from .calculus import (ConnectionData, TorsionError, connection_field, connection_from_field,
                       curvature, curvature_from_connection, delta, delta_field, delta_inv,
                       hodge_defect, nabla, riemann, sigma)
from .contraction import (ContractionError, FormValuedMorphism, check_relations,
                          contract_to_flat, flat_morphism, homotopy_step, is_flat)
from .identify import (IllPosedError, lambda_D, lambda_D_inverse, lambda_T, lambda_T_inverse,
                       nu, nu_inverse, varrho)
from .resolution import (FedosovData, build_A, D_squared, fedosov_D, flatness_residual, phi,
                         reliable_degree, tau)
from .transport import transport, transport_connection

__all__ = [
    "ConnectionData", "TorsionError", "connection_field", "connection_from_field", "curvature",
    "curvature_from_connection", "delta", "delta_field", "delta_inv", "hodge_defect", "nabla",
    "riemann", "sigma", "FedosovData", "build_A", "D_squared", "fedosov_D", "flatness_residual", "phi",
    "reliable_degree", "tau", "ContractionError", "FormValuedMorphism", "check_relations",
    "contract_to_flat", "flat_morphism", "homotopy_step", "is_flat", "IllPosedError", "lambda_D",
    "lambda_D_inverse", "lambda_T", "lambda_T_inverse", "nu", "nu_inverse", "varrho",
    "transport", "transport_connection",
]
