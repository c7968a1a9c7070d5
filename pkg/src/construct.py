"""
Construction of a proximate growth function V majorizing A with limsup A/V = 1.

Works in s = ln M(e^x), phi = ln A(e^x). The tail half of the grid gets the upper
concave majorant of phi joined to a ray of slope rho* (the order of A relative
to M); the head gets its own concave majorant. Slopes are then smoothed per
segment and integrated from the right end, so V touches A at the tail anchor.
"""
import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .asymptotics import LimitEstimate, LimitStatus, estimate_liminf, estimate_limsup
from .config import Config
from .core import FunctionSource, GridSpec, LogLogSample, Track, evaluate, working_xs
from .errors import DegenerateGridError, InfiniteOrderError, PreconditionError
from .model import ModelGrowth, ensure_model
from .proximate import ProximateVerdict, RhoTrack, check_proximate, rho_track

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OrderEstimate:
    rho_star: float
    finite: bool
    track: Track
    limsup: LimitEstimate
    lower: LimitEstimate

    def to_dict(self) -> dict:
        return {
            "rho_star": float(self.rho_star),
            "finite": self.finite,
            "limsup": self.limsup.to_dict(),
            "lower_order": self.lower.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class ConstructionResult:
    v: LogLogSample
    ln_a: np.ndarray
    rho_m: RhoTrack
    touch_indices: np.ndarray
    q_upper: float
    q_touch: float
    proximate: ProximateVerdict
    order: OrderEstimate
    tail_slopes: np.ndarray
    tail_gap: float
    success: bool
    warnings: Tuple[str, ...] = ()

    @property
    def rho_star(self) -> float:
        return self.order.rho_star

    def to_dict(self) -> dict:
        return {
            "rho_star": float(self.rho_star),
            "rho": self.proximate.rho.to_dict(),
            "is_proximate": self.proximate.is_proximate,
            "q_upper": float(self.q_upper),
            "q_touch": float(self.q_touch),
            "touch_count": int(self.touch_indices.size),
            "tail_gap": float(self.tail_gap),
            "lower_order": self.order.lower.to_dict(),
            "success": self.success,
            "warnings": list(self.warnings),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "x": self.v.xs,
            "lnA": self.ln_a,
            "lnV": self.v.ys,
            "rho_m": self.rho_m.rho_m,
        })


def upper_hull(s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vertex indices of the upper concave majorant (monotone chain, s increasing)."""
    hull: List[int] = []
    for i in range(s.size):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (s[a] - s[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (s[i] - s[o])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.array(hull, dtype=int)


def _restricted_xs(A: FunctionSource, model: ModelGrowth, grid: Optional[GridSpec], min_log: float):
    xs = working_xs(grid, A, model.source)
    yM = evaluate(model.source, xs)
    above = yM >= min_log
    if not np.any(above):
        raise DegenerateGridError(f"ln {model.label} never reaches {min_log:g} on the grid")
    k = int(np.argmax(above))
    return xs[k:], yM[k:]


def _order_from(xs: np.ndarray, s: np.ndarray, phi: np.ndarray, cfg: Config, label: str) -> OrderEstimate:
    steps = np.diff(phi)
    noise = 1e-12 * np.maximum(1.0, np.abs(phi[1:]))
    if np.any(steps < -noise):
        x = float(xs[1 + int(np.argmax(steps < -noise))])
        raise PreconditionError(f"{label} is not increasing at x={x:.6g}")
    track = Track(xs, np.logaddexp(0.0, phi) / s)
    lim_cfg = replace(cfg.limits, tail_fraction=cfg.construct.order_tail_fraction)
    sup = estimate_limsup(track, lim_cfg)
    if sup.status is LimitStatus.DIVERGED:
        raise InfiniteOrderError(f"{label} is of infinite order: ln(1+A)/ln M grows without bound")
    lower = estimate_liminf(track, lim_cfg)
    rho_star = sup.value if sup.converged else sup.extremum
    return OrderEstimate(float(rho_star), sup.converged, track, sup, lower)


def order_estimate(
    A: FunctionSource,
    M: Union[ModelGrowth, FunctionSource],
    grid: Optional[GridSpec] = None,
    config: Optional[Config] = None,
) -> OrderEstimate:
    """limsup ln(1+A)/ln M over the tail window."""
    cfg = config or Config()
    model = ensure_model(M, grid)
    xs, s = _restricted_xs(A, model, grid, cfg.model.min_log_model)
    est = _order_from(xs, s, evaluate(A, xs), cfg, A.label)
    logger.info("order of %s rel %s: rho*=%.6g (%s)", A.label, model.label, est.rho_star, est.limsup.status.value)
    return est


def _smooth(s: np.ndarray, E: np.ndarray, start: int, end: int, width: float) -> np.ndarray:
    """
    Forward-averaged slopes over intervals start..end-1 of the piecewise-linear E,
    truncated at s[end]. Never exceeds the raw slope when E is concave on the segment.
    """
    seg_s, seg_E = s[start:end + 1], E[start:end + 1]
    mids = 0.5 * (seg_s[:-1] + seg_s[1:])
    tops = np.minimum(mids + width, seg_s[-1])
    raw = np.diff(seg_E) / np.diff(seg_s)
    span = tops - mids
    out = raw.copy()
    ok = span > 0
    out[ok] = (np.interp(tops[ok], seg_s, seg_E) - np.interp(mids[ok], seg_s, seg_E)) / span[ok]
    return np.minimum(out, raw)


def construct_proximate(
    A: FunctionSource,
    M: Union[ModelGrowth, FunctionSource],
    grid: Optional[GridSpec] = None,
    config: Optional[Config] = None,
) -> ConstructionResult:
    """Build ln V on the working points and measure how well it realizes limsup A/V = 1."""
    cfg = config or Config()
    c = cfg.construct
    model = ensure_model(M, grid)
    xs, s = _restricted_xs(A, model, grid, cfg.model.min_log_model)
    if xs.size < c.min_points:
        raise DegenerateGridError(
            f"{xs.size} points remain where ln M >= {cfg.model.min_log_model:g}; need {c.min_points}"
        )
    phi = evaluate(A, xs)
    order = _order_from(xs, s, phi, cfg, A.label)
    if not order.finite:
        raise InfiniteOrderError(
            f"order of {A.label} is not settled on the grid (limsup {order.limsup.status.value}); "
            "widen the window or extend the grid"
        )
    rho_star = order.rho_star
    warnings: List[str] = []
    if order.limsup.tail_residual > cfg.limits.tol_limit:
        warnings.append(
            f"last two order windows differ by {order.limsup.tail_residual:.3g}; "
            "rho* may miss an oscillation crest"
        )

    n = xs.size
    t = int(np.argmax(xs >= xs[0] + 0.5 * (xs[-1] - xs[0])))

    # Tail: anchored ray of slope rho*, then the concave majorant
    i_star = t + int(np.argmax(phi[t:] - rho_star * s[t:]))
    psi = phi.copy()
    psi[i_star:] = np.maximum(phi[i_star:], phi[i_star] + rho_star * (s[i_star:] - s[i_star]))
    tail_v = upper_hull(s[t:], psi[t:]) + t
    head_v = upper_hull(s[:t + 1], psi[:t + 1])

    E = np.empty(n)
    E[:t] = np.interp(s[:t], s[head_v], psi[head_v])
    E[t:] = np.interp(s[t:], s[tail_v], psi[tail_v])
    tail_slopes = np.diff(psi[tail_v]) / np.diff(s[tail_v])
    if np.any(np.diff(tail_slopes) > 1e-9 * max(1.0, abs(rho_star))):
        logger.warning("tail hull slopes are not non-increasing")

    width = c.smoothing_fraction * (s[-1] - s[0])
    slopes = np.concatenate([_smooth(s, E, 0, t, width), _smooth(s, E, t, n - 1, width)])
    increments = slopes * np.diff(s)
    E_smooth = np.empty(n)
    E_smooth[-1] = E[-1]
    E_smooth[:-1] = E[-1] - np.cumsum(increments[::-1])[::-1]
    E_smooth += max(0.0, float(np.max(phi - E_smooth)))

    v = LogLogSample(xs, E_smooth, label=f"V[{A.label}]")
    gap = phi - E_smooth
    tail = np.arange(n) >= t
    q_upper = float(np.exp(np.max(gap)))
    q_touch = float(np.exp(np.max(gap[tail])))
    touch = np.flatnonzero(gap >= np.log1p(-c.touch_tol))
    tail_gap = float(np.max(-gap[tail]))

    verdict = check_proximate(v, model, settings=cfg.limits)
    rt = rho_track(v, model)
    success = bool(
        verdict.is_proximate
        and abs(verdict.rho.value - rho_star) <= max(cfg.limits.agreement_tol, 3.0 * verdict.rho.tail_residual)
        and q_upper <= 1.0 + c.construct_tol
        and q_touch >= 1.0 - c.construct_tol
        and np.any(touch >= t)
    )
    for w in warnings:
        logger.warning("construct %s: %s", A.label, w)
    logger.info(
        "construct %s rel %s: rho*=%.6g q_upper=%.6g q_touch=%.6g success=%s",
        A.label, model.label, rho_star, q_upper, q_touch, success,
    )
    return ConstructionResult(
        v, phi, rt, touch, q_upper, q_touch, verdict, order, tail_slopes, tail_gap, success, tuple(warnings)
    )
