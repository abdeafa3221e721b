"""Geodesic censuses and thin-part volumes for Bianchi orbifolds."""
from ._kernels import BACKEND
from .errors import PreconditionError, ResourceCeilingError
from .qfield import QuadField, class_number, field_from_disc, fundamental_unit, make_field, zeta2
from .bianchi import horoball_cover, verify_cover, volume
from .flats import QForm, act, enumerate_forms_through_cusp, equivalent_forms, meets_horoball
from .spectrum import count_geodesics, short_disc_set, thin_part_report, vigneras_count

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "PreconditionError",
    "QForm",
    "QuadField",
    "ResourceCeilingError",
    "act",
    "class_number",
    "count_geodesics",
    "enumerate_forms_through_cusp",
    "equivalent_forms",
    "field_from_disc",
    "fundamental_unit",
    "horoball_cover",
    "make_field",
    "meets_horoball",
    "short_disc_set",
    "thin_part_report",
    "verify_cover",
    "vigneras_count",
    "volume",
    "zeta2",
]
