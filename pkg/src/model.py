"""
Model growth validation.

M is a model growth function when M > 0, M' > 0, M(e^x) is convex in x and
M(r) -> +inf. All four clauses are checked on the sampled ray only.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from .asymptotics import LimitStatus, estimate_limit
from .config import LimitConfig, ModelConfig
from .core import (
    AnalyticFamily,
    FunctionSource,
    GridSpec,
    LogLogSample,
    Track,
    _check_ray,
    _raw_eval,
    derivative_track,
    dlog_exact,
    working_xs,
)
from .errors import EvaluationDomainError, ModelValidationError

logger = logging.getLogger(__name__)

CLAUSES = ("positive", "derivative_positive", "log_convex", "divergent")


@dataclass(frozen=True)
class Witness:
    x: float
    clause: str
    detail: str

    def to_dict(self) -> dict:
        return {"x": float(self.x), "clause": self.clause, "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    positive: bool
    derivative_positive: bool
    log_convex: bool
    divergent: bool
    witnesses: Tuple[Witness, ...]
    sampled_ray: Tuple[float, float]

    @property
    def passing(self) -> bool:
        return self.positive and self.derivative_positive and self.log_convex and self.divergent

    def failed_clauses(self) -> List[str]:
        return [c for c in CLAUSES if not getattr(self, c)]

    def to_dict(self) -> dict:
        return {
            "passing": self.passing,
            "clauses": {c: getattr(self, c) for c in CLAUSES},
            "witnesses": [w.to_dict() for w in self.witnesses],
            "scope": "sampled ray only",
            "sampled_ray": [float(self.sampled_ray[0]), float(self.sampled_ray[1])],
        }


@dataclass(frozen=True)
class ModelGrowth:
    """A source that passed validation. Build it with require_model."""
    source: FunctionSource
    validation: ValidationReport

    def __post_init__(self):
        if not self.validation.passing:
            raise ModelValidationError(
                f"{self.label} is not a model: fails {', '.join(self.validation.failed_clauses())}",
                report=self.validation,
            )

    @property
    def label(self) -> str:
        return self.source.label


def _witnesses(xs: np.ndarray, bad: np.ndarray, clause: str, detail, limit: int) -> List[Witness]:
    idx = np.flatnonzero(bad)[:limit]
    return [Witness(float(xs[i]), clause, detail(i)) for i in idx]


def _convexity_defects(xs: np.ndarray, ys: np.ndarray, tol: float) -> np.ndarray:
    """
    Second differences of m = e^y divided by m_i, in log storage:
    m_{i+1}/m_i - 1 = expm1(y_{i+1} - y_i). Returns a mask over interior points.
    """
    h = np.diff(xs)
    dy = np.diff(ys)
    with np.errstate(over="ignore", invalid="ignore"):
        up = np.expm1(dy[1:])
        down = np.expm1(-dy[:-1])
        weighted = 0.5 * (h[1:] + h[:-1]) * (up / h[1:] + down / h[:-1])
        scale = np.maximum(1.0, np.abs(up) + np.abs(down))
    return ~(weighted >= -tol * scale)


def validate_model(
    candidate: FunctionSource,
    grid: Optional[GridSpec] = None,
    settings: Optional[ModelConfig] = None,
    limit_settings: Optional[LimitConfig] = None,
    numeric: bool = False,
) -> ValidationReport:
    """Check the four model clauses on the working points and collect witnesses."""
    cfg = settings or ModelConfig()
    cap = cfg.max_witnesses
    xs = working_xs(grid, candidate)
    witnesses: List[Witness] = []

    if isinstance(candidate, AnalyticFamily):
        _check_ray(candidate, xs)
        ys = _raw_eval(candidate, xs)
    else:
        ys = np.array(candidate.ys)

    finite = np.isfinite(ys)
    positive = bool(np.all(finite))
    if not positive:
        witnesses += _witnesses(xs, ~finite, "positive", lambda i: f"ln M = {ys[i]}", cap)
        xs, ys = xs[finite], ys[finite]
    if xs.size < 3:
        raise EvaluationDomainError(f"{candidate.label} is finite at fewer than 3 grid points")

    if isinstance(candidate, AnalyticFamily) and candidate.dlog is not None and not numeric:
        dys = dlog_exact(candidate, xs)
    else:
        dys = derivative_track(xs, ys)
    interior = np.zeros(xs.size, dtype=bool)
    interior[1:-1] = True
    bad_d = interior & ~(dys > 0)
    derivative_positive = not bool(np.any(bad_d))
    witnesses += _witnesses(xs, bad_d, "derivative_positive", lambda i: f"d ln M/dx = {dys[i]:.6g}", cap)

    defects = np.zeros(xs.size, dtype=bool)
    defects[1:-1] = _convexity_defects(xs, ys, cfg.tol_convex)
    log_convex = not bool(np.any(defects))
    witnesses += _witnesses(xs, defects, "log_convex", lambda i: "M(e^x) second difference < 0", cap)

    lim = estimate_limit(Track(xs, ys), limit_settings)
    divergent = lim.status is LimitStatus.DIVERGED
    if not divergent:
        witnesses.append(Witness(float(xs[-1]), "divergent", f"ln M tail status {lim.status.value}"))

    report = ValidationReport(
        positive, derivative_positive, log_convex, divergent, tuple(witnesses), (float(xs[0]), float(xs[-1]))
    )
    logger.info("validate_model %s: passing=%s %s", candidate.label, report.passing, report.failed_clauses())
    return report


def is_model_subharmonic_radial(candidate: FunctionSource, grid: Optional[GridSpec] = None, **kwargs) -> bool:
    """Radial subharmonicity of M(|z|) outside a disk is exactly convexity of M(e^x)."""
    return validate_model(candidate, grid, **kwargs).log_convex


def require_model(candidate: FunctionSource, grid: Optional[GridSpec] = None, **kwargs) -> ModelGrowth:
    return ModelGrowth(candidate, validate_model(candidate, grid, **kwargs))


def ensure_model(M: Union[ModelGrowth, FunctionSource], grid: Optional[GridSpec] = None, **kwargs) -> ModelGrowth:
    if isinstance(M, ModelGrowth):
        return M
    return require_model(M, grid, **kwargs)
