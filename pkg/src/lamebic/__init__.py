"""Bound states embedded at the band edges of the Lamé potential.

Submodules: ``elliptic`` (Jacobi functions, K), ``grid`` (sampling and
quadrature), ``lame`` (potential and band edges), ``darboux`` (deformation
chain), ``spectral`` (verification), ``cli``.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .darboux import DeformationChain, DeformationStep, build_chain, deform_once, deform_twice
from .elliptic import complete_elliptic_K, jacobi_derivatives, jacobi_elliptic
from .grid import Grid, SampledFunction, cumulative_integral, derivative_2nd
from .lame import BandEdgeState, LameConfig, band_edge_states, half_line_seeds, lame_potential
from .spectral import hill_discriminant_scan, integrability_test, schrodinger_residual, verify_chain

__all__ = [
    "BACKEND", "BandEdgeState", "DeformationChain", "DeformationStep", "Grid", "LameConfig",
    "SampledFunction", "band_edge_states", "build_chain", "complete_elliptic_K",
    "cumulative_integral", "deform_once", "deform_twice", "derivative_2nd", "half_line_seeds",
    "hill_discriminant_scan", "integrability_test", "jacobi_derivatives", "jacobi_elliptic",
    "lame_potential", "schrodinger_residual", "verify_chain",
]
