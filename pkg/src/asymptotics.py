"""
Tail estimation at +infinity: limits, upper/lower limits and the L'Hopital check.

A track is examined over its tail window (last `tail_fraction` of the x-range),
split into eighths. Decisions are made from per-eighth amplitudes and extrema.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

from .config import LimitConfig
from .core import AnalyticFamily, GridSpec, LogLogSample, Track, profile, working_xs
from .errors import PreconditionError, SingularPointError, TrackTooShortError

logger = logging.getLogger(__name__)

MIN_TRACK_POINTS = 32
N_CHUNKS = 8

TrackLike = Union[Track, LogLogSample, Tuple[np.ndarray, np.ndarray]]


class LimitStatus(str, Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged-to-infinity"
    OSCILLATING = "oscillating"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class LimitEstimate:
    status: LimitStatus
    tail_residual: float
    window: Tuple[float, float]
    value: Optional[float] = None
    extremum: Optional[float] = None  # window max (limsup) / min (liminf), diagnostic only

    def __post_init__(self):
        if (self.value is not None) != (self.status is LimitStatus.CONVERGED):
            raise ValueError("value is present iff status is converged")
        if not self.tail_residual >= 0:
            raise ValueError("tail_residual must be non-negative")

    @property
    def converged(self) -> bool:
        return self.status is LimitStatus.CONVERGED

    def to_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "tail_residual": float(self.tail_residual),
            "window": [float(self.window[0]), float(self.window[1])],
        }
        if self.value is not None:
            out["value"] = float(self.value)
        return out


@dataclass(frozen=True)
class LhopitalCase:
    f: AnalyticFamily
    g: AnalyticFamily
    expected_L: Optional[float] = None


@dataclass(frozen=True)
class LhopitalReport:
    precondition: LimitEstimate
    derivative_ratio: LimitEstimate
    value_ratio: LimitEstimate
    tolerance: float
    passed: bool
    expected_L: Optional[float] = None
    matches_expected: Optional[bool] = None

    @property
    def difference(self) -> Optional[float]:
        if self.derivative_ratio.converged and self.value_ratio.converged:
            return abs(self.derivative_ratio.value - self.value_ratio.value)
        return None

    def to_dict(self) -> dict:
        return {
            "precondition": self.precondition.to_dict(),
            "L_prime": self.derivative_ratio.to_dict(),
            "L_second": self.value_ratio.to_dict(),
            "difference": self.difference,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "expected_L": self.expected_L,
            "matches_expected": self.matches_expected,
        }


def _as_arrays(track: TrackLike) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(track, LogLogSample):
        return np.asarray(track.xs), np.asarray(track.ys)
    if isinstance(track, Track):
        return np.asarray(track.xs), np.asarray(track.values)
    xs, vals = track
    t = Track(xs, vals)
    return np.asarray(t.xs), np.asarray(t.values)


class _Window:
    """Tail window of a track, split into eighths."""

    def __init__(self, track: TrackLike, tail_fraction: float):
        xs, vals = _as_arrays(track)
        if xs.size < MIN_TRACK_POINTS:
            raise TrackTooShortError(f"track has {xs.size} points, need at least {MIN_TRACK_POINTS}")
        x_lo = xs[-1] - tail_fraction * (xs[-1] - xs[0])
        mask = xs >= x_lo
        if int(mask.sum()) < 2 * N_CHUNKS:
            raise TrackTooShortError(
                f"tail window holds {int(mask.sum())} points, need at least {2 * N_CHUNKS}"
            )
        self.xs = xs[mask]
        self.vals = vals[mask]
        self.bounds = (float(self.xs[0]), float(self.xs[-1]))
        idx = np.array_split(np.arange(self.xs.size), N_CHUNKS)
        self.x_chunks: List[np.ndarray] = [self.xs[i] for i in idx]
        self.chunks: List[np.ndarray] = [self.vals[i] for i in idx]

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([c.max() - c.min() for c in self.chunks])

    def residual(self, center: float) -> float:
        quarter = np.concatenate(self.chunks[-2:])
        return float(np.max(np.abs(quarter - center)))

    def non_decreasing(self) -> bool:
        noise = 1e-12 * max(1.0, float(np.max(np.abs(self.vals))))
        return bool(np.all(np.diff(self.vals) >= -noise))

    def non_increasing(self) -> bool:
        noise = 1e-12 * max(1.0, float(np.max(np.abs(self.vals))))
        return bool(np.all(np.diff(self.vals) <= noise))

    def diverges_up(self, threshold: float) -> bool:
        """Monotone growth past the threshold, or increments decaying no faster than 1/x."""
        if not self.non_decreasing():
            return False
        if self.vals[-1] > threshold:
            return True
        # growth per unit x
        spans = np.array([c[-1] - c[0] for c in self.x_chunks])
        rates = self.amplitudes / spans
        if rates[0] <= 0:
            return False
        mid_first = float(self.x_chunks[0].mean())
        mid_last = float(self.x_chunks[-1].mean())
        expected = mid_first / mid_last if mid_first > 0 else 0.0
        return rates[-1] / rates[0] >= 0.9 * expected


def _settings(settings: Optional[LimitConfig]) -> LimitConfig:
    return settings or LimitConfig()


def _non_finite(w: _Window) -> Optional[LimitEstimate]:
    if np.all(np.isfinite(w.vals)):
        return None
    if np.any(np.isposinf(w.vals)) and not np.any(np.isnan(w.vals)):
        return LimitEstimate(LimitStatus.DIVERGED, 0.0, w.bounds)
    logger.warning("Non-finite values in tail window %s", w.bounds)
    return LimitEstimate(LimitStatus.INCONCLUSIVE, 0.0, w.bounds)


def estimate_limit(track: TrackLike, settings: Optional[LimitConfig] = None) -> LimitEstimate:
    """Estimate lim_{x->inf} of a track from its tail window."""
    s = _settings(settings)
    w = _Window(track, s.tail_fraction)
    bad = _non_finite(w)
    if bad is not None:
        return bad

    amps = w.amplitudes
    center = float(w.chunks[-1].mean())
    residual = w.residual(center)
    slack = s.slack_fraction * s.tol_limit

    if np.all(np.diff(amps) <= slack) and amps[-1] <= s.tol_limit:
        return LimitEstimate(LimitStatus.CONVERGED, residual, w.bounds, value=center)
    if w.diverges_up(s.divergence_threshold):
        return LimitEstimate(LimitStatus.DIVERGED, residual, w.bounds)
    monotone = w.non_decreasing() or w.non_increasing()
    if not monotone and amps[-1] >= 0.5 * amps[0] and amps[-1] > s.tol_limit:
        return LimitEstimate(LimitStatus.OSCILLATING, residual, w.bounds)
    logger.debug("Limit inconclusive on %s: amplitudes %s", w.bounds, amps)
    return LimitEstimate(LimitStatus.INCONCLUSIVE, residual, w.bounds)


def estimate_limsup(track: TrackLike, settings: Optional[LimitConfig] = None) -> LimitEstimate:
    """Window-max estimate of limsup; converged when later maxima show no upward drift."""
    s = _settings(settings)
    w = _Window(track, s.tail_fraction)
    bad = _non_finite(w)
    if bad is not None:
        return bad

    maxima = np.array([c.max() for c in w.chunks])
    top = float(maxima.max())
    residual = float(abs(maxima[-1] - maxima[-2]))
    if residual > s.tol_limit:
        logger.debug("limsup: last two window maxima differ by %.3g", residual)

    if w.diverges_up(s.divergence_threshold):
        return LimitEstimate(LimitStatus.DIVERGED, residual, w.bounds, extremum=top)
    if maxima[N_CHUNKS // 2:].max() <= maxima[:N_CHUNKS // 2].max() + s.tol_limit:
        return LimitEstimate(LimitStatus.CONVERGED, residual, w.bounds, value=top, extremum=top)
    return LimitEstimate(LimitStatus.INCONCLUSIVE, residual, w.bounds, extremum=top)


def estimate_liminf(track: TrackLike, settings: Optional[LimitConfig] = None) -> LimitEstimate:
    """Window-min estimate of liminf; mirror of estimate_limsup."""
    s = _settings(settings)
    w = _Window(track, s.tail_fraction)
    bad = _non_finite(w)
    if bad is not None:
        return bad

    minima = np.array([c.min() for c in w.chunks])
    low = float(minima.min())
    residual = float(abs(minima[-1] - minima[-2]))

    if w.diverges_up(s.divergence_threshold):
        return LimitEstimate(LimitStatus.DIVERGED, residual, w.bounds, extremum=low)
    if minima[N_CHUNKS // 2:].min() >= minima[:N_CHUNKS // 2].min() - s.tol_limit:
        return LimitEstimate(LimitStatus.CONVERGED, residual, w.bounds, value=low, extremum=low)
    return LimitEstimate(LimitStatus.INCONCLUSIVE, residual, w.bounds, extremum=low)


def verify_lhopital(
    case: LhopitalCase,
    grid: Optional[GridSpec] = None,
    settings: Optional[LimitConfig] = None,
    numeric: bool = False,
) -> LhopitalReport:
    """
    Check lim f'/g' = L  =>  lim f/g = L when |g| -> inf.

    f and g are read in log coordinates: f(e^x) = case.f.eval_loglog(x). Both
    derivatives are taken in x; the chain factor e^x cancels in the ratio.
    """
    s = _settings(settings)
    xs = working_xs(grid, case.f, case.g)
    pf = profile(case.f, xs, numeric=numeric)
    pg = profile(case.g, xs, numeric=numeric)

    pre = estimate_limit(Track(xs, np.abs(pg.ys)), s)
    if pre.status is not LimitStatus.DIVERGED:
        raise PreconditionError(
            f"|g| does not diverge on the grid (status {pre.status.value}); L'Hopital rule does not apply"
        )
    for what, arr in (("g'", pg.dys), ("g", pg.ys)):
        zero = arr == 0
        if np.any(zero):
            x = float(xs[int(np.argmax(zero))])
            raise SingularPointError(f"{what} vanishes at x={x:.6g}", x=x)

    d_ratio = estimate_limit(Track(xs, pf.dys / pg.dys), s)
    v_ratio = estimate_limit(Track(xs, pf.ys / pg.ys), s)
    tolerance = max(s.tol_limit, 3.0 * (d_ratio.tail_residual + v_ratio.tail_residual))
    passed = (
        d_ratio.converged
        and v_ratio.converged
        and abs(d_ratio.value - v_ratio.value) <= tolerance
    )
    matches = None
    if case.expected_L is not None:
        matches = bool(d_ratio.converged and abs(d_ratio.value - case.expected_L) <= tolerance)
    logger.info(
        "L'Hopital %s / %s: L'=%s L''=%s passed=%s",
        case.f.label, case.g.label, d_ratio.value, v_ratio.value, passed,
    )
    return LhopitalReport(pre, d_ratio, v_ratio, tolerance, bool(passed), case.expected_L, matches)
