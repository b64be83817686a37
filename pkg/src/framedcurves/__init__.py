"""Framed space curves, their normal surfaces, singularities, evolutes and involutes."""
__version__ = "0.1.0"

from .curve import (FramedCurve, bishop_frame, curvature, reconstruct_from_curvature,
                    rotated_frame, validate)
from .evolute_involute import (circular_evolute, cusp_correspondence, involute, parallel_curve,
                               support_function_contact, verify_identities)
from .singularity import (classify_curve_point, classify_surface, classify_surface_point,
                          find_curve_singularities, find_surface_singularities)
from .surface import (basic_invariants, build_normal_surface, check_integrability,
                      classify_developable, export_mesh, solve_framing, surface_curvature)
