"""
Core: ray domain, log-coordinate storage, analytic families and the derivative engine.

Everything is stored in log coordinates x = ln r, y = ln F(r). That is the change
of variable m(x) = M(e^x) and it keeps r ~ e^(10^4) representable.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .config import GridConfig
from .errors import (
    CapabilityError,
    EvaluationDomainError,
    GridMismatchError,
    IndexRangeError,
    SampleFormatError,
)

logger = logging.getLogger(__name__)

MIN_SAMPLE_POINTS = 8
ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Ray:
    """Ray of positive direction in the log coordinate: {x >= x0} (or x > x0 when open)."""
    x0: float
    closed: bool = True

    def __post_init__(self):
        if not np.isfinite(self.x0):
            raise ValueError(f"Ray endpoint must be finite, got {self.x0}")

    def contains(self, x: float) -> bool:
        return x >= self.x0 if self.closed else x > self.x0


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid in x (geometric in r)."""
    x0: float
    x1: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.x0) and np.isfinite(self.x1)):
            raise ValueError("Grid endpoints must be finite")
        if not self.x0 < self.x1:
            raise ValueError(f"Grid needs x0 < x1, got [{self.x0}, {self.x1}]")
        if self.n < MIN_SAMPLE_POINTS:
            raise ValueError(f"Grid needs at least {MIN_SAMPLE_POINTS} points, got {self.n}")

    @property
    def step(self) -> float:
        return (self.x1 - self.x0) / (self.n - 1)

    def xs(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.n)

    @classmethod
    def from_config(cls, cfg: Optional[GridConfig] = None) -> "GridSpec":
        cfg = cfg or GridConfig()
        return cls(cfg.x0, cfg.x1, cfg.n)


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise SampleFormatError(f"{name} must be one-dimensional")
    arr.setflags(write=False)
    return arr


def _check_increasing(xs: np.ndarray) -> None:
    steps = np.diff(xs)
    if np.any(~(steps > 0)):
        i = int(np.argmax(~(steps > 0)))
        raise SampleFormatError(f"xs must be strictly increasing (violated at x={xs[i + 1]:.6g})")


@dataclass(frozen=True, eq=False)
class Track:
    """A value track over x; no finiteness requirement on the values."""
    xs: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        xs = _frozen_array(self.xs, "xs")
        values = _frozen_array(self.values, "values")
        if xs.shape != values.shape:
            raise SampleFormatError(f"xs and values differ in length ({xs.size} vs {values.size})")
        _check_increasing(xs)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.xs.size


@dataclass(frozen=True, eq=False)
class LogLogSample:
    """A function on a ray stored as x_i = ln r_i, y_i = ln F(r_i)."""
    xs: np.ndarray
    ys: np.ndarray
    label: str = "sample"

    def __post_init__(self):
        xs = _frozen_array(self.xs, "xs")
        ys = _frozen_array(self.ys, "ys")
        if xs.shape != ys.shape:
            raise SampleFormatError(f"xs and ys differ in length ({xs.size} vs {ys.size})")
        if xs.size < MIN_SAMPLE_POINTS:
            raise SampleFormatError(f"sample needs at least {MIN_SAMPLE_POINTS} points, got {xs.size}")
        bad = ~(np.isfinite(xs) & np.isfinite(ys))
        if np.any(bad):
            i = int(np.argmax(bad))
            raise SampleFormatError(f"non-finite sample value at row {i} (x={xs[i]})")
        _check_increasing(xs)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self) -> int:
        return self.xs.size

    def restrict(self, mask: np.ndarray) -> "LogLogSample":
        return LogLogSample(self.xs[mask], self.ys[mask], label=self.label)


@dataclass(frozen=True, eq=False)
class AnalyticFamily:
    """
    Named closed-form family. eval_loglog maps x to ln F(e^x); dlog is its exact
    x-derivative when known. Order families (kind="order") store rho(e^x) itself.
    """
    name: str
    params: dict = field(default_factory=dict)
    eval_loglog: ArrayFn = None
    dlog: Optional[ArrayFn] = None
    ray: Optional[Ray] = None
    x_max: float = np.inf
    kind: str = "growth"  # growth | order

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}:{args}"

    @property
    def has_exact_derivative(self) -> bool:
        return self.dlog is not None


FunctionSource = Union[AnalyticFamily, LogLogSample]


@dataclass(frozen=True, eq=False)
class Profile:
    """A source evaluated on working points, with its x-derivative."""
    xs: np.ndarray
    ys: np.ndarray
    dys: np.ndarray
    exact: bool
    label: str

    def restrict(self, mask: np.ndarray) -> "Profile":
        return Profile(self.xs[mask], self.ys[mask], self.dys[mask], self.exact, self.label)


def _broadcast(values, xs: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(values, dtype=float), xs.shape).astype(float)


def _raw_eval(family: AnalyticFamily, xs: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        return _broadcast(family.eval_loglog(xs), xs)


def _check_ray(family: AnalyticFamily, xs: np.ndarray) -> None:
    if family.ray is not None and xs.size and not family.ray.contains(float(xs[0])):
        raise EvaluationDomainError(
            f"{family.label} is defined only for x {'>=' if family.ray.closed else '>'} "
            f"{family.ray.x0:g}; got x={xs[0]:.6g}",
            x=float(xs[0]),
        )
    if xs.size and xs[-1] > family.x_max:
        raise EvaluationDomainError(
            f"{family.label} overflows beyond x={family.x_max:g}; got x={xs[-1]:.6g}",
            x=float(xs[-1]),
        )


def _require_finite(values: np.ndarray, xs: np.ndarray, what: str) -> None:
    bad = ~np.isfinite(values)
    if np.any(bad):
        x = float(xs[int(np.argmax(bad))])
        raise EvaluationDomainError(f"{what} is not finite at x={x:.6g}", x=x)


def sample(family: AnalyticFamily, grid: GridSpec) -> LogLogSample:
    """Evaluate a family on a uniform grid."""
    xs = grid.xs()
    _check_ray(family, xs)
    ys = _raw_eval(family, xs)
    _require_finite(ys, xs, family.label)
    return LogLogSample(xs, ys, label=family.label)


def dlog_numeric(s: LogLogSample, i: int, one_sided: bool = False) -> float:
    """Central difference at an interior index; one-sided at the ends only on request."""
    n = len(s)
    if 1 <= i <= n - 2:
        return float((s.ys[i + 1] - s.ys[i - 1]) / (s.xs[i + 1] - s.xs[i - 1]))
    if one_sided and i == 0:
        return float((s.ys[1] - s.ys[0]) / (s.xs[1] - s.xs[0]))
    if one_sided and i == n - 1:
        return float((s.ys[-1] - s.ys[-2]) / (s.xs[-1] - s.xs[-2]))
    raise IndexRangeError(f"index {i} is not an interior point of a sample of length {n}")


def dlog_exact(family: AnalyticFamily, x):
    """Exact d/dx ln F(e^x); accepts scalars or arrays."""
    if family.dlog is None:
        raise CapabilityError(f"{family.label} has no exact derivative")
    xs = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _broadcast(family.dlog(xs), xs)
    return float(out) if out.ndim == 0 else out


def derivative_track(xs: np.ndarray, ys: np.ndarray, stencil: int = 3) -> np.ndarray:
    """
    Numerical x-derivative of a whole track.
    Interior: (y[i+1]-y[i-1])/(x[i+1]-x[i-1]); ends: second-order one-sided.
    stencil=5 uses the five-point formula where it fits (uniform grids only).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 3:
        raise IndexRangeError("derivative needs at least 3 points")
    out = np.gradient(ys, xs, edge_order=2)
    out[1:-1] = (ys[2:] - ys[:-2]) / (xs[2:] - xs[:-2])
    if stencil == 5:
        steps = np.diff(xs)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise CapabilityError("five-point stencil requires a uniform grid")
        if xs.size >= 5:
            h = steps[0]
            out[2:-2] = (-ys[4:] + 8.0 * ys[3:-1] - 8.0 * ys[1:-3] + ys[:-4]) / (12.0 * h)
    elif stencil != 3:
        raise ValueError(f"unsupported stencil {stencil}")
    return out


def _sample_mask(s: LogLogSample, xs: np.ndarray) -> np.ndarray:
    if xs.shape == s.xs.shape and np.array_equal(xs, s.xs):
        return np.ones(s.xs.size, dtype=bool)
    mask = np.isin(s.xs, xs)
    if int(mask.sum()) != xs.size:
        raise GridMismatchError(f"{s.label} is not sampled on the requested points")
    return mask


def evaluate(source: FunctionSource, xs: np.ndarray) -> np.ndarray:
    """ln-values of a source on working points; raises on non-finite values."""
    xs = np.asarray(xs, dtype=float)
    if isinstance(source, LogLogSample):
        return np.array(source.ys[_sample_mask(source, xs)])
    _check_ray(source, xs)
    ys = _raw_eval(source, xs)
    _require_finite(ys, xs, source.label)
    return ys


def profile(source: FunctionSource, xs: np.ndarray, numeric: bool = False, stencil: int = 3) -> Profile:
    """Values and x-derivatives; exact derivatives unless numeric or unavailable."""
    xs = np.asarray(xs, dtype=float)
    if isinstance(source, LogLogSample):
        mask = _sample_mask(source, xs)
        dys = derivative_track(source.xs, source.ys, stencil)
        return Profile(xs, np.array(source.ys[mask]), dys[mask], False, source.label)
    ys = evaluate(source, xs)
    if source.dlog is not None and not numeric:
        dys = dlog_exact(source, xs)
        _require_finite(dys, xs, f"derivative of {source.label}")
        return Profile(xs, ys, dys, True, source.label)
    return Profile(xs, ys, derivative_track(xs, ys, stencil), False, source.label)


def working_xs(grid: Optional[GridSpec], *sources: FunctionSource) -> np.ndarray:
    """Working points: a sample fixes them, otherwise the grid (default grid when None)."""
    samples = [s for s in sources if isinstance(s, LogLogSample)]
    if samples:
        base = samples[0]
        for other in samples[1:]:
            if not np.array_equal(base.xs, other.xs):
                raise GridMismatchError(f"{base.label} and {other.label} are sampled on different grids")
        if grid is not None:
            logger.debug("Grid %s ignored: %s fixes the working points", grid, base.label)
        return np.array(base.xs)
    if grid is None:
        grid = default_grid_for(*sources)
    return grid.xs()


def default_grid_for(*families: FunctionSource, cfg: Optional[GridConfig] = None) -> GridSpec:
    """Default grid clipped to the representable range of the given families."""
    grid = GridSpec.from_config(cfg)
    x_max = min((f.x_max for f in families if isinstance(f, AnalyticFamily)), default=np.inf)
    if x_max < grid.x1:
        return GridSpec(grid.x0, x_max, grid.n)
    return grid


# Family combinators

def scale_family(family: AnalyticFamily, c: float) -> AnalyticFamily:
    """c * F for c > 0."""
    if not c > 0:
        raise ValueError("scale factor must be positive")
    shift = float(np.log(c))
    return AnalyticFamily(
        name=f"{family.name}*{c:g}",
        params=dict(family.params),
        eval_loglog=lambda x: family.eval_loglog(x) + shift,
        dlog=family.dlog,
        ray=family.ray,
        x_max=family.x_max,
    )


def power_family(family: AnalyticFamily, a: float) -> AnalyticFamily:
    """F^a for a > 0."""
    if not a > 0:
        raise ValueError("power must be positive")
    return AnalyticFamily(
        name=f"{family.name}^{a:g}",
        params=dict(family.params),
        eval_loglog=lambda x: a * family.eval_loglog(x),
        dlog=(lambda x: a * family.dlog(x)) if family.dlog is not None else None,
        ray=family.ray,
        x_max=family.x_max,
    )


def compose_family(outer: AnalyticFamily, model: AnalyticFamily) -> AnalyticFamily:
    """A = T o M: ln A(e^x) = ln T(e^s) with s = ln M(e^x)."""
    dlog = None
    if outer.dlog is not None and model.dlog is not None:
        dlog = lambda x: outer.dlog(model.eval_loglog(x)) * model.dlog(x)  # noqa: E731
    return AnalyticFamily(
        name=f"{outer.name}@{model.name}",
        params={**outer.params, **{f"m_{k}": v for k, v in model.params.items()}},
        eval_loglog=lambda x: outer.eval_loglog(model.eval_loglog(x)),
        dlog=dlog,
        ray=model.ray,
        x_max=model.x_max,
    )


def order_as_growth(rho: FunctionSource) -> FunctionSource:
    """V(r) = r^rho(r): ln V(e^x) = x * rho(e^x)."""
    if isinstance(rho, LogLogSample):
        return LogLogSample(rho.xs, rho.xs * rho.ys, label=f"r^{rho.label}")
    dlog = None
    if rho.dlog is not None:
        dlog = lambda x: rho.eval_loglog(x) + x * rho.dlog(x)  # noqa: E731
    return AnalyticFamily(
        name=f"r^{rho.name}",
        params=dict(rho.params),
        eval_loglog=lambda x: x * rho.eval_loglog(x),
        dlog=dlog,
        ray=rho.ray,
        x_max=rho.x_max,
    )


# CSV exchange

def read_sample_csv(path: Union[str, Path], column: Optional[str] = None, log_values: bool = True) -> LogLogSample:
    """
    Read `x,y` (log coordinates, taken as-is) or `r,value` (raw; x = ln r and,
    when log_values, y = ln value).
    """
    path = Path(path)
    try:
        df = pd.read_csv(path, encoding="utf-8", float_precision="round_trip")
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as e:
        raise SampleFormatError(f"{path}: {e}") from e
    df.columns = [str(c).strip() for c in df.columns]
    if len(df.columns) < 2 or df.empty:
        raise SampleFormatError(f"{path}: need a header and at least two columns")
    first = df.columns[0]
    if first not in ("x", "r"):
        raise SampleFormatError(f"{path}: first column must be 'x' or 'r', got {first!r}")
    default_col = "y" if first == "x" else "value"
    col = column or (default_col if default_col in df.columns else df.columns[1])
    if col not in df.columns:
        raise SampleFormatError(f"{path}: no column {col!r}")
    try:
        keys = pd.to_numeric(df[first]).to_numpy(dtype=float)
        vals = pd.to_numeric(df[col]).to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise SampleFormatError(f"{path}: {e}") from e
    if first == "x":
        return LogLogSample(keys, vals, label=f"csv:{path.name}")
    if np.any(keys <= 0):
        row = int(np.argmax(keys <= 0))
        raise SampleFormatError(f"{path}: r must be positive (row {row})")
    if log_values:
        if np.any(vals <= 0):
            row = int(np.argmax(vals <= 0))
            raise SampleFormatError(f"{path}: value must be positive (row {row}, r={keys[row]:g})")
        vals = np.log(vals)
    return LogLogSample(np.log(keys), vals, label=f"csv:{path.name}")


def write_sample_csv(s: LogLogSample, path: Union[str, Path], columns: Sequence[str] = ("x", "y")) -> Path:
    path = Path(path)
    pd.DataFrame({columns[0]: s.xs, columns[1]: s.ys}).to_csv(path, index=False, float_format="%.17g")
    return path
