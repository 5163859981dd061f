"""solitonlab: curvature computation, verification and classification for
structured 4-dimensional gradient Ricci solitons with harmonic Weyl
curvature (divergence-free Weyl tensor).

The package computes closed-form curvature of block-warped metric ansaetze,
cross-checks it against an independent finite-difference engine on
coordinate grids, integrates the reduced first-order soliton system,
verifies the defining identities, and classifies sampled data into the four
local soliton types (Einstein / plane x surface product / singular steady /
locally conformally flat warped product).
"""

from .classify import EigenSignature, TypeVerdict, classify, eigen_signature
from .curvature import (CurvatureBundle, DWConnection, dw_connection,
                        dw_full_bundle, dw_ricci, dw_table, family_bundle,
                        family_eigenvalues, family_table, family_weyl_sq,
                        warp3_full_bundle, warp3_ricci, warp3_table)
from .errors import (DomainError, GridBoundaryError, PreconditionError,
                     UnsupportedFamilyError)
from .families import (FiberProfile, MetricFamily, Profile, SolitonData,
                       broken_family, canonical_soliton_for, constant_profile,
                       cylinder_family, doubly_warped_family, family_from_json,
                       family_metric_at, family_to_json, fiber_profile_eval,
                       flat_family, gaussian_family, log_profile,
                       power_profile, product_family, quadratic_potential,
                       sin_profile, singular_steady_family, sphere_family,
                       soliton_data, warped3_family)
from .fdgrid import (MetricGrid, bundle_to_json, bundles_to_json, fd_curvature,
                     fd_partial, grid_from_family, grid_from_json, grid_to_json)
from .frames import (Frame4, as_sym2, ricci_from_riemann,
                     riemann_symmetry_residuals, scalar_from_ricci, sym_eigen,
                     tensor_norm, weyl_from_riemann)
from .reduced import (DwDerivatives, ReducedState, Trajectory, branch_label,
                      distinct_fprime, distinct_frame_relations, dw_rhs,
                      exclusion_residual, integrate, product_state,
                      reduced_identity_residuals, singular_steady_state,
                      warp3_rhs)
from .verify import (ResidualReport, codazzi_residual_closed, hamilton_check,
                     soliton_residual)

__version__ = "0.1.0"
