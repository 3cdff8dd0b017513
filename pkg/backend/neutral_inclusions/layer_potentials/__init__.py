"""Layer potentials and Nystrom operator matrices."""

from .operators import (
    BoundaryOperatorMatrix,
    LayerDensity,
    dnS_cross_matrix,
    np_matrix,
    single_layer_eval,
    single_layer_gradient,
    single_layer_matrix,
    winding_number,
)

__all__ = [
    "BoundaryOperatorMatrix", "LayerDensity", "dnS_cross_matrix", "np_matrix",
    "single_layer_eval", "single_layer_gradient", "single_layer_matrix", "winding_number",
]
