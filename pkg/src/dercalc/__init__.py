"""Derivation-based differential calculus on matrix algebras, matrix-valued
polynomial functions, and the deformed (star-product) plane."""

from .core_algebra import (AlgebraBasis, build_basis, commutator, default_tol,
                           expand_traceless, inner_derivation, is_hermitian,
                           is_traceless)
from .derivation_calculus import (DerivationFrame, Form, interior, koszul_d,
                                  lie_derivative, operation_subspaces, wedge)
from .matrix_geometry import (IntegrationConfig, MatrixFrame, build_matrix_frame,
                              canonical_itheta, cohomology_betti, nc_integrate)
from .connections import (ConnectionOnA, ModuleConnection, curvature_on_A,
                          flat_gauge_equivalent, gauge_transform,
                          hermitian_compatible, is_flat, module_curvature)
from .matrix_functions import (MixedFrame, PolyMatrix, WeightedMetric,
                               build_mixed_frame, curvature_trigrade, hat_d,
                               nc_integrate_mixed, splitting_itheta, ymh_action)
from .moyal import (IspFrame, MoyalConfig, MoyalPoly, build_isp_frame,
                    canonical_curvature, canonical_eta, format_poly,
                    parse_poly, poisson_bracket, star, star_commutator)

__version__ = "0.1.0"
