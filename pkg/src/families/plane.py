"""Plane functions u(z) for the circle/disk/sup means. Evaluated as u(r e^{it})."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple

import numpy as np

from ..errors import PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PlaneFunction:
    """
    u: C -> [-inf, inf). log_poles are points where u = -inf; unbounded_points
    are where u = +inf (sup over a circle through one is an error).
    """
    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)
    log_poles: Tuple[complex, ...] = ()
    unbounded_points: Tuple[complex, ...] = ()

    def values(self, r: float, t) -> np.ndarray:
        z = r * np.exp(1j * np.asarray(t, dtype=float))
        with np.errstate(all="ignore"):
            return np.asarray(self.fn(z), dtype=float)

    def value(self, r: float, t: float) -> float:
        return float(self.values(r, np.array([t]))[0])

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v:g}" for k, v in self.params.items())


def logabs() -> PlaneFunction:
    """u(z) = ln|z|."""
    return PlaneFunction("logabs", lambda z: np.log(np.abs(z)), log_poles=(0j,))


def logshift(a: float = 1.0, b: float = 0.0) -> PlaneFunction:
    """u(z) = ln|z - (a + ib)|."""
    c = complex(a, b)
    return PlaneFunction(
        "logshift", lambda z: np.log(np.abs(z - c)), params={"a": a, "b": b}, log_poles=(c,)
    )


def abssq() -> PlaneFunction:
    """u(z) = |z|^2."""
    return PlaneFunction("abssq", lambda z: np.abs(z) ** 2)


def re() -> PlaneFunction:
    """u(z) = Re z (harmonic)."""
    return PlaneFunction("re", lambda z: np.real(z))


def posre() -> PlaneFunction:
    """u(z) = max(Re z, 0)."""
    return PlaneFunction("posre", lambda z: np.maximum(np.real(z), 0.0))


def rotate(u: PlaneFunction, theta: float) -> PlaneFunction:
    """u(z e^{i theta}); circle and disk means are rotation invariant."""
    w = np.exp(1j * theta)
    return PlaneFunction(
        f"{u.name}@rot",
        lambda z: u.fn(z * w),
        params={**u.params, "theta": theta},
        log_poles=tuple(p / w for p in u.log_poles),
        unbounded_points=tuple(p / w for p in u.unbounded_points),
    )


def max_plane(u: PlaneFunction, v: PlaneFunction) -> PlaneFunction:
    """max(u, v). Subharmonic when both are; -inf only where both are, +inf where either is."""
    return PlaneFunction(
        f"max({u.label},{v.label})",
        lambda z: np.maximum(u.fn(z), v.fn(z)),
        log_poles=tuple(p for p in u.log_poles if p in v.log_poles),
        unbounded_points=tuple(dict.fromkeys(u.unbounded_points + v.unbounded_points)),
    )


def maxshift(a: float = 1.0) -> PlaneFunction:
    """u(z) = max(ln|z - a|, ln|z + a|); the kink lies on the imaginary axis."""
    u = max_plane(logshift(a), logshift(-a))
    return PlaneFunction("maxshift", u.fn, params={"a": a}, log_poles=u.log_poles)


def shift_plane(u: PlaneFunction, c: float) -> PlaneFunction:
    """u + c."""
    if c == 0:
        return u
    return PlaneFunction(
        u.name,
        lambda z: u.fn(z) + c,
        params={**u.params, "shift": c},
        log_poles=u.log_poles,
        unbounded_points=u.unbounded_points,
    )


PLANE_CATALOG: Dict[str, Callable[..., PlaneFunction]] = {
    "logabs": logabs,
    "logshift": logshift,
    "abssq": abssq,
    "re": re,
    "posre": posre,
    "maxshift": maxshift,
}


def make_plane_function(name: str, params: dict = None) -> PlaneFunction:
    if name not in PLANE_CATALOG:
        raise PreconditionError(
            f"unknown plane function {name!r}; known: {', '.join(sorted(PLANE_CATALOG))}"
        )
    try:
        return PLANE_CATALOG[name](**(params or {}))
    except TypeError as e:
        raise PreconditionError(f"bad parameters for {name}: {e}") from e
