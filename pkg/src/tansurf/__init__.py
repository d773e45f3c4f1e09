"""Tangent developable surfaces of frontal curves.

Frontal curves (f' = a*tau with a unit tangent frame), their tangent
developables f(t) + s*tau(t), parallels along parallel-transported normal
frames, the directrix curves that make every parallel a tangent surface
again, Wronskian curve types, and the classification of the resulting
singularities for curves in 3- and 4-space, backed by an exact rational
algebra layer for the catalog normal forms.
"""

from .classify import (
    NORMAL_FORMS,
    SingularityLabel,
    SingularityName,
    classify_type,
    generic_type_patterns,
    normal_form,
    normal_form_consistency,
    normal_form_surface,
    swallowtail_primitive,
    unfurled_family,
)
from .curve import (
    CurveType,
    FrontalCurve,
    NotFrontalError,
    TypeUndeterminedError,
    builtin_curve,
    cone_fixture,
    curve_from_components,
    curve_from_frame_data,
    curve_from_polynomials,
    curve_from_spec,
    detect_primitive_type,
    detect_type,
    find_inflections,
    type_shift_check,
    wronskian,
)
from .frame import (
    FrameState,
    FrameTrace,
    InflectionError,
    kappa_order_check,
    principal_normal,
    transport_bishop,
    unit_normal_field,
)
from .jets import Jet, RationalPoly, inverse_norm
from .surface import (
    ParallelSpec,
    ParametricSurface,
    directrix,
    directrix_point_formula,
    export_obj,
    parallel_equals_tangent_of_directrix,
    parallel_surface,
    singular_locus,
    tangent_surface,
)
from .verify import run_suite

__version__ = "0.1.0"
