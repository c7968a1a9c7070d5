"""
Circle, disk and sup means of plane functions, and their export as growth candidates.

  C_u(r) = (1/2pi) int u(r e^{it}) dt
  B_u(r) = k(r) int_0^r C_u(s) s ds,   k = 2/r^2 (area) or 2/(pi r^2) (paper)
  M_u(r) = sup_{|z|=r} u(z)
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.integrate import simpson
from scipy.optimize import minimize_scalar

from .config import QuadratureConfig
from .core import LogLogSample
from .errors import PreconditionError, SingularityError, UnboundedOnCircleError
from .families.plane import PlaneFunction, shift_plane

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


class Normalization(str, Enum):
    AREA = "area"
    PAPER = "paper"


@dataclass(frozen=True, eq=False)
class MeansSeries:
    rs: np.ndarray
    c: np.ndarray
    b: np.ndarray
    m: np.ndarray
    normalization: Normalization
    shift: float = 0.0
    label: str = "u"

    def __post_init__(self):
        if np.any(np.diff(self.rs) <= 0):
            raise PreconditionError("radii must be strictly increasing")
        for name in ("c", "b", "m"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise PreconditionError(f"non-finite {name} values in means series")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "r": self.rs,
            "c": self.c,
            "b": self.b,
            "m": self.m,
            "normalization": self.normalization.value,
        })

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "normalization": self.normalization.value,
            "shift": self.shift,
            "r": self.rs.tolist(),
            "c": self.c.tolist(),
            "b": self.b.tolist(),
            "m": self.m.tolist(),
        }


def _check_radius(r: float) -> None:
    if not (np.isfinite(r) and r > 0):
        raise PreconditionError(f"radius must be positive, got {r}")


def _pole_on_node(u: PlaneFunction, r: float, h: float) -> bool:
    for p in u.log_poles + u.unbounded_points:
        if abs(abs(p) - r) <= 1e-12 * max(1.0, r):
            k = (np.angle(p) % TWO_PI) / h
            if abs(k - round(k)) < 1e-9:
                return True
    return False


def circle_mean(u: PlaneFunction, r: float, n_quad: Optional[int] = None,
                settings: Optional[QuadratureConfig] = None) -> float:
    """Periodic trapezoid rule; nodes shift by half a step when a singularity sits on one."""
    n = n_quad or (settings or QuadratureConfig()).n_quad
    _check_radius(r)
    if n < 16 or n & (n - 1):
        raise PreconditionError(f"n_quad must be a power of two >= 16, got {n}")
    h = TWO_PI / n
    t = h * np.arange(n)
    if _pole_on_node(u, r, h):
        logger.debug("circle_mean %s r=%g: singular node, offsetting by half a step", u.label, r)
        t = t + 0.5 * h
    vals = u.values(r, t)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        angle = float(t[int(np.argmax(bad))])
        raise SingularityError(f"{u.label} is not finite at r={r:g}, t={angle:.6g}", angle=angle)
    return float(vals.mean())


def disk_mean(u: PlaneFunction, r: float, normalization: Union[Normalization, str, None] = None,
              n_quad: Optional[int] = None, n_radial: Optional[int] = None,
              settings: Optional[QuadratureConfig] = None) -> float:
    """Composite Simpson over s of s*C_u(s), split at the radii of log poles."""
    cfg = settings or QuadratureConfig()
    norm = Normalization(normalization or cfg.normalization)
    n_rad = n_radial or cfg.n_radial
    _check_radius(r)
    if n_rad < 16:
        raise PreconditionError(f"n_radial must be >= 16, got {n_rad}")

    breaks = sorted({abs(p) for p in u.log_poles if 0 < abs(p) < r})
    edges = [0.0, *breaks, float(r)]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        s = np.linspace(a, b, n_rad + 1)
        f = np.array([si * circle_mean(u, si, n_quad, cfg) if si > 0 else 0.0 for si in s])
        total += float(simpson(f, x=s))

    k = 2.0 / r ** 2 if norm is Normalization.AREA else 2.0 / (np.pi * r ** 2)
    return k * total


def sup_on_circle(u: PlaneFunction, r: float, n_scan: Optional[int] = None,
                  refine_tol: Optional[float] = None,
                  settings: Optional[QuadratureConfig] = None) -> float:
    """Scan, then golden-section refinement around the best angle."""
    cfg = settings or QuadratureConfig()
    n = n_scan or cfg.n_scan
    tol = refine_tol or cfg.refine_tol
    _check_radius(r)
    for p in u.unbounded_points:
        if abs(abs(p) - r) <= 1e-12 * max(1.0, r):
            raise UnboundedOnCircleError(f"{u.label} is unbounded on the circle r={r:g}")

    h = TWO_PI / n
    t = h * np.arange(n)
    vals = u.values(r, t)
    if np.any(np.isposinf(vals)):
        raise UnboundedOnCircleError(f"{u.label} is unbounded on the circle r={r:g}")
    finite = np.isfinite(vals)
    if not np.any(finite):
        raise SingularityError(f"{u.label} has no finite value on the circle r={r:g}")
    if not np.all(finite):
        logger.warning("sup_on_circle %s r=%g: skipping %d singular nodes", u.label, r, int((~finite).sum()))
    vals = np.where(finite, vals, -np.inf)

    k = int(np.argmax(vals))
    best = float(vals[k])
    left, right = vals[(k - 1) % n], vals[(k + 1) % n]
    if not (best > left and best > right):
        return best
    res = minimize_scalar(
        lambda a: -u.value(r, a),
        bracket=(t[k] - h, t[k], t[k] + h),
        method="golden",
        tol=tol,
    )
    refined = -float(res.fun)
    return max(best, refined) if np.isfinite(refined) else best


def means_series(u: PlaneFunction, radii: Sequence[float],
                 settings: Optional[QuadratureConfig] = None,
                 normalization: Union[Normalization, str, None] = None,
                 shift: float = 0.0) -> MeansSeries:
    """C_u, B_u and M_u per radius; a constant shift u + c is applied first and recorded."""
    cfg = settings or QuadratureConfig()
    rs = np.asarray(radii, dtype=float)
    if rs.ndim != 1 or rs.size == 0 or np.any(rs <= 0) or np.any(np.diff(rs) <= 0):
        raise PreconditionError("radii must be positive and strictly increasing")
    norm = Normalization(normalization or cfg.normalization)
    v = shift_plane(u, shift)

    c = np.array([circle_mean(v, r, settings=cfg) for r in rs])
    b = np.array([disk_mean(v, r, norm, settings=cfg) for r in rs])
    m = np.array([sup_on_circle(v, r, settings=cfg) for r in rs])
    logger.info("means_series %s: %d radii in [%g, %g], %s", u.label, rs.size, rs[0], rs[-1], norm.value)
    return MeansSeries(rs, c, b, m, norm, shift, u.label)


def export_component(series: MeansSeries, component: str = "c", shift: float = 0.0) -> LogLogSample:
    """Export C, B or M (plus shift) as a growth candidate over the radii where it is positive."""
    if component not in ("c", "b", "m"):
        raise PreconditionError(f"unknown component {component!r}")
    values = getattr(series, component) + shift
    positive = values > 0
    if int(positive.sum()) < 8:
        raise PreconditionError(
            f"{component} is positive at only {int(positive.sum())} radii; use a positive shift"
        )
    if not np.all(positive[int(np.argmax(positive)):]):
        logger.warning("%s of %s changes sign after first becoming positive", component, series.label)
    return LogLogSample(
        np.log(series.rs[positive]), np.log(values[positive]), label=f"{component.upper()}[{series.label}]"
    )
