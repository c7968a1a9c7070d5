"""
Growth and order family catalog.

Each builder returns an AnalyticFamily in log coordinates:
  growth families: x -> ln F(e^x)
  order families:  x -> rho(e^x)
"""
import logging
from typing import Callable, Dict, Tuple

import numpy as np
from scipy.special import expit

from ..core import AnalyticFamily, Ray
from ..errors import PreconditionError

logger = logging.getLogger(__name__)

POSITIVE_X = Ray(0.0, closed=False)
EXPO_X_MAX = 700.0


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def pow_family(rho: float = 2.0) -> AnalyticFamily:
    """F(r) = r^rho."""
    return AnalyticFamily(
        name="pow",
        params={"rho": rho},
        eval_loglog=lambda x: rho * _arr(x),
        dlog=lambda x: np.full_like(_arr(x), rho),
    )


def powlog_family(rho: float = 1.0, b: float = 1.0) -> AnalyticFamily:
    """F(r) = r^rho (ln r)^b."""
    return AnalyticFamily(
        name="powlog",
        params={"rho": rho, "b": b},
        eval_loglog=lambda x: rho * _arr(x) + b * np.log(x),
        dlog=lambda x: rho + b / _arr(x),
        ray=POSITIVE_X,
    )


def powloglog_family(rho: float = 2.0, b: float = 1.0) -> AnalyticFamily:
    """F(r) = r^(rho + b ln ln r / ln r)."""
    x_rho = lambda x: _arr(x) * (rho + b * np.log(x) / _arr(x))  # noqa: E731
    return AnalyticFamily(
        name="powloglog",
        params={"rho": rho, "b": b},
        eval_loglog=x_rho,
        dlog=lambda x: rho + b / _arr(x),
        ray=POSITIVE_X,
    )


def osc_family(rho: float = 2.0, a: float = 1.0) -> AnalyticFamily:
    """F(r) = r^(rho + a sin ln r); order track does not settle."""
    def dlog(x):
        x = _arr(x)
        return rho + a * np.sin(x) + a * x * np.cos(x)

    return AnalyticFamily(
        name="osc",
        params={"rho": rho, "a": a},
        eval_loglog=lambda x: (rho + a * np.sin(x)) * _arr(x),
        dlog=dlog,
    )


def oscslow_family(rho: float = 2.0, a: float = 1.0) -> AnalyticFamily:
    """F(r) = r^(rho + a sin ln ln r)."""
    def dlog(x):
        lx = np.log(x)
        return rho + a * np.sin(lx) + a * np.cos(lx)

    return AnalyticFamily(
        name="oscslow",
        params={"rho": rho, "a": a},
        eval_loglog=lambda x: (rho + a * np.sin(np.log(x))) * _arr(x),
        dlog=dlog,
        ray=POSITIVE_X,
    )


def expo_family(c: float = 1.0) -> AnalyticFamily:
    """F(r) = exp(c r)."""
    if not c > 0:
        raise PreconditionError("expo needs c > 0")
    return AnalyticFamily(
        name="expo",
        params={"c": c},
        eval_loglog=lambda x: c * np.exp(x),
        dlog=lambda x: c * np.exp(x),
        x_max=EXPO_X_MAX,
    )


def sqrtlog_family() -> AnalyticFamily:
    """F(r) = exp(sqrt(ln r)); zero order."""
    return AnalyticFamily(
        name="sqrtlog",
        eval_loglog=lambda x: np.sqrt(x),
        dlog=lambda x: 0.5 / np.sqrt(x),
        ray=POSITIVE_X,
    )


def id_family() -> AnalyticFamily:
    """F(r) = r."""
    return AnalyticFamily(
        name="id",
        eval_loglog=lambda x: _arr(x),
        dlog=lambda x: np.ones_like(_arr(x)),
    )


def log_family() -> AnalyticFamily:
    """F(r) = ln r."""
    return AnalyticFamily(
        name="log",
        eval_loglog=lambda x: np.log(x),
        dlog=lambda x: 1.0 / _arr(x),
        ray=POSITIVE_X,
    )


def recip_family(c: float = 1.0, a: float = 1.0) -> AnalyticFamily:
    """ln F(e^x) = c + a / x; used as an L'Hopital numerator."""
    return AnalyticFamily(
        name="recip",
        params={"c": c, "a": a},
        eval_loglog=lambda x: c + a / _arr(x),
        dlog=lambda x: -a / _arr(x) ** 2,
        ray=POSITIVE_X,
    )


def inv1p_family() -> AnalyticFamily:
    """F(r) = 1 / (1 + r); decreasing, not a model."""
    return AnalyticFamily(
        name="inv1p",
        eval_loglog=lambda x: -np.logaddexp(0.0, x),
        dlog=lambda x: -expit(x),
    )


def gauss_family() -> AnalyticFamily:
    """ln F(e^x) = -x^2; fails log-convexity."""
    return AnalyticFamily(
        name="gauss",
        eval_loglog=lambda x: -_arr(x) ** 2,
        dlog=lambda x: -2.0 * _arr(x),
    )


def oscmodel_family() -> AnalyticFamily:
    """F(r) = r (2 + sin ln r); increasing, log-convex, yet l1 oscillates."""
    return AnalyticFamily(
        name="oscmodel",
        eval_loglog=lambda x: _arr(x) + np.log(2.0 + np.sin(x)),
        dlog=lambda x: 1.0 + np.cos(x) / (2.0 + np.sin(x)),
    )


# Order families

def const_order(rho: float = 1.0) -> AnalyticFamily:
    return AnalyticFamily(
        name="const",
        params={"rho": rho},
        eval_loglog=lambda x: np.full_like(_arr(x), rho),
        dlog=lambda x: np.zeros_like(_arr(x)),
        kind="order",
    )


def loglog_order(rho: float = 1.0, b: float = 1.0) -> AnalyticFamily:
    """rho(r) = rho + b ln ln r / ln r."""
    def dlog(x):
        x = _arr(x)
        return b * (1.0 - np.log(x)) / x ** 2

    return AnalyticFamily(
        name="loglog",
        params={"rho": rho, "b": b},
        eval_loglog=lambda x: rho + b * np.log(x) / _arr(x),
        dlog=dlog,
        ray=POSITIVE_X,
        kind="order",
    )


def sinlog_order(rho: float = 1.0, a: float = 1.0) -> AnalyticFamily:
    """rho(r) = rho + a sin(ln r) / ln r."""
    def dlog(x):
        x = _arr(x)
        return a * (np.cos(x) / x - np.sin(x) / x ** 2)

    return AnalyticFamily(
        name="sinlog",
        params={"rho": rho, "a": a},
        eval_loglog=lambda x: rho + a * np.sin(x) / _arr(x),
        dlog=dlog,
        ray=POSITIVE_X,
        kind="order",
    )


GROWTH_CATALOG: Dict[str, Callable[..., AnalyticFamily]] = {
    "pow": pow_family,
    "powlog": powlog_family,
    "powloglog": powloglog_family,
    "osc": osc_family,
    "oscslow": oscslow_family,
    "expo": expo_family,
    "sqrtlog": sqrtlog_family,
    "id": id_family,
    "log": log_family,
    "recip": recip_family,
    "inv1p": inv1p_family,
    "gauss": gauss_family,
    "oscmodel": oscmodel_family,
}

ORDER_CATALOG: Dict[str, Callable[..., AnalyticFamily]] = {
    "const": const_order,
    "loglog": loglog_order,
    "sinlog": sinlog_order,
}

# Families documented as models on the default grid
MODEL_NAMES: Tuple[str, ...] = ("id", "log", "expo", "powlog", "oscmodel")


def make_family(name: str, params: dict = None, kind: str = "growth") -> AnalyticFamily:
    """Build a catalog family by name; unknown names or parameters raise PreconditionError."""
    catalog = GROWTH_CATALOG if kind == "growth" else ORDER_CATALOG
    if name not in catalog:
        raise PreconditionError(
            f"unknown {kind} family {name!r}; known: {', '.join(sorted(catalog))}"
        )
    try:
        return catalog[name](**(params or {}))
    except TypeError as e:
        raise PreconditionError(f"bad parameters for {name}: {e}") from e
