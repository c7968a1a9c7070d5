"""
Configuration loader for the proximate growth toolkit.
Loads defaults from the environment (and an optional .env); CLI flags override.
"""
import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

load_dotenv()

_PREFIX = "PROXGROWTH_"


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(_PREFIX + name)
    return float(raw) if raw not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(_PREFIX + name)
    return int(raw) if raw not in (None, "") else default


def _env_str(name: str, default: str) -> str:
    return os.getenv(_PREFIX + name) or default


@dataclass
class GridConfig:
    """Default working grid in log coordinates."""
    x0: float = 1.0
    x1: float = 1.0e4
    n: int = 4096


@dataclass
class LimitConfig:
    """Tail limit estimation."""
    tol_limit: float = 1e-2
    divergence_threshold: float = 1e6
    tail_fraction: float = 0.5
    slack_fraction: float = 0.1  # allowed amplitude rebound, as a fraction of tol_limit
    agreement_tol: float = 2e-2


@dataclass
class ModelConfig:
    """Model growth validation."""
    tol_convex: float = 1e-9
    min_log_model: float = 0.1
    max_witnesses: int = 10


@dataclass
class QuadratureConfig:
    """Circle / disk means."""
    n_quad: int = 512
    n_radial: int = 64
    n_scan: int = 1024
    refine_tol: float = 1e-10
    normalization: str = "area"  # area | paper


@dataclass
class ConstructConfig:
    """Proximate growth function construction."""
    smoothing_fraction: float = 0.02
    touch_tol: float = 1e-3
    construct_tol: float = 1e-2
    order_tail_fraction: float = 0.5
    min_points: int = 64


@dataclass
class Config:
    """Main application configuration."""
    grid: GridConfig = field(default_factory=GridConfig)
    limits: LimitConfig = field(default_factory=LimitConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    construct: ConstructConfig = field(default_factory=ConstructConfig)

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables."""
        grid = GridConfig(
            x0=_env_float("X0", 1.0),
            x1=_env_float("X1", 1.0e4),
            n=_env_int("N", 4096),
        )
        limits = LimitConfig(
            tol_limit=_env_float("TOL_LIMIT", 1e-2),
            divergence_threshold=_env_float("DIVERGENCE_THRESHOLD", 1e6),
            tail_fraction=_env_float("TAIL_FRACTION", 0.5),
            slack_fraction=_env_float("SLACK_FRACTION", 0.1),
            agreement_tol=_env_float("AGREEMENT_TOL", 2e-2),
        )
        model = ModelConfig(
            tol_convex=_env_float("TOL_CONVEX", 1e-9),
            min_log_model=_env_float("MIN_LOG_MODEL", 0.1),
            max_witnesses=_env_int("MAX_WITNESSES", 10),
        )
        quadrature = QuadratureConfig(
            n_quad=_env_int("N_QUAD", 512),
            n_radial=_env_int("N_RADIAL", 64),
            n_scan=_env_int("N_SCAN", 1024),
            refine_tol=_env_float("REFINE_TOL", 1e-10),
            normalization=_env_str("NORMALIZATION", "area"),
        )
        construct = ConstructConfig(
            smoothing_fraction=_env_float("SMOOTHING_FRACTION", 0.02),
            touch_tol=_env_float("TOUCH_TOL", 1e-3),
            construct_tol=_env_float("CONSTRUCT_TOL", 1e-2),
            order_tail_fraction=_env_float("ORDER_TAIL_FRACTION", 0.5),
            min_points=_env_int("MIN_POINTS", 64),
        )
        return cls(grid=grid, limits=limits, model=model, quadrature=quadrature, construct=construct)
