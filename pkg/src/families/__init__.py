"""Function catalogs: growth/order families on a ray and plane functions."""
from .growth import GROWTH_CATALOG, MODEL_NAMES, ORDER_CATALOG, make_family
from .plane import PLANE_CATALOG, PlaneFunction, make_plane_function

__all__ = [
    "GROWTH_CATALOG",
    "ORDER_CATALOG",
    "MODEL_NAMES",
    "make_family",
    "PLANE_CATALOG",
    "PlaneFunction",
    "make_plane_function",
]
