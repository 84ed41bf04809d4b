"""Star points and A_k singularities on projective hypersurfaces, in exact arithmetic."""

from .algebra import HPoly, Ratio, TruncSeries, parse_poly, ratio
from .certificates import verify
from .families import (
    FamilyError,
    FamilyMember,
    cone_over_curve,
    deformation_to_Ad2,
    extremal_family,
    extremal_singularities,
    family_dimension,
    family_dimension_oracle,
    lemma_surface,
    line_Ak_surface,
    proper_star_deformation,
    star_family,
    star_sum_check,
)
from .geometry import (
    GeometryError,
    Hypersurface,
    LinSubspace,
    ProjPoint,
    restrict_to_hyperplane,
    singular_points_on_line,
    tangent_hyperplane,
    transform_to_standard,
)
from .markers import CONTAINS_HYPERPLANE, INCONCLUSIVE, OVERFLOW, SINGULAR, SMOOTH, Marker
from .singularities import SingReport, classify_Ak, localize, morse_split, replay
from .starpoints import (
    analyze_star_configuration,
    cone_oracle,
    contact_order,
    generic_point_is_star,
    is_cone,
    is_star_point,
    is_star_point_with_plane,
    is_total_inflection,
    star_line_certificate,
    total_inflections_on_line,
)

__version__ = "0.1.0"

__all__ = [
    "CONTAINS_HYPERPLANE",
    "FamilyError",
    "FamilyMember",
    "GeometryError",
    "HPoly",
    "Hypersurface",
    "INCONCLUSIVE",
    "LinSubspace",
    "Marker",
    "OVERFLOW",
    "ProjPoint",
    "Ratio",
    "SINGULAR",
    "SMOOTH",
    "SingReport",
    "TruncSeries",
    "analyze_star_configuration",
    "classify_Ak",
    "cone_oracle",
    "cone_over_curve",
    "contact_order",
    "deformation_to_Ad2",
    "extremal_family",
    "extremal_singularities",
    "family_dimension",
    "family_dimension_oracle",
    "generic_point_is_star",
    "is_cone",
    "is_star_point",
    "is_star_point_with_plane",
    "is_total_inflection",
    "lemma_surface",
    "line_Ak_surface",
    "localize",
    "morse_split",
    "parse_poly",
    "proper_star_deformation",
    "ratio",
    "replay",
    "restrict_to_hyperplane",
    "singular_points_on_line",
    "star_family",
    "star_line_certificate",
    "star_sum_check",
    "tangent_hyperplane",
    "total_inflections_on_line",
    "transform_to_standard",
    "verify",
]
