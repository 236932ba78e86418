"""c-map: the deformed quaternionic Kähler metric and its frame data."""

from .frames import (
    FrameForms,
    HoloCoords,
    complex_structure,
    frame_form_metric,
    frame_forms,
    holomorphic_coords,
    holomorphic_differentials,
    j1_from_holomorphic,
    kahler_forms,
    omega1_differential,
    omega1_expanded,
    omega1_structure_rhs,
    pairing_form,
    quaternion_sign,
    select_dc_sign,
    two_form_of,
)
from .metric import (
    Domain,
    Layout,
    QkPoint,
    base_data,
    chn_closed_form,
    deformed_fs_metric,
    domain_classify,
    fs_metric,
    lower_bound_gap,
    metric_field,
    scaling_jacobian,
    scaling_map,
)

__all__ = [
    "Domain",
    "FrameForms",
    "HoloCoords",
    "Layout",
    "QkPoint",
    "base_data",
    "chn_closed_form",
    "complex_structure",
    "deformed_fs_metric",
    "domain_classify",
    "frame_form_metric",
    "frame_forms",
    "fs_metric",
    "holomorphic_coords",
    "holomorphic_differentials",
    "j1_from_holomorphic",
    "kahler_forms",
    "lower_bound_gap",
    "metric_field",
    "omega1_differential",
    "omega1_expanded",
    "omega1_structure_rhs",
    "pairing_form",
    "quaternion_sign",
    "scaling_jacobian",
    "scaling_map",
    "select_dc_sign",
    "two_form_of",
]
