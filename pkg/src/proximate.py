"""
Proximate growth relative to a model growth function M.

With x = ln r, yV = ln V(e^x), yM = ln M(e^x) and d = d/dx:

  l1      = d yV / d yM                       (M V' / (M' V))
  rho_M   = yV / yM
  limit-4 = yM * d rho_M / d yM               ((M/M') rho_M' ln M)

and identically l1 = rho_M + (yM / d yM) * d rho_M.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .asymptotics import LimitEstimate, estimate_limit
from .config import Config, LimitConfig
from .core import (
    AnalyticFamily,
    FunctionSource,
    GridSpec,
    LogLogSample,
    Profile,
    Track,
    order_as_growth,
    profile,
    working_xs,
)
from .errors import DomainError, PreconditionError, SingularPointError
from .families.growth import id_family
from .model import ModelGrowth, ensure_model

logger = logging.getLogger(__name__)

ModelLike = Union[ModelGrowth, FunctionSource]


@dataclass(frozen=True, eq=False)
class ProximateVerdict:
    is_proximate: bool
    rho: LimitEstimate
    l1_track: Track

    def to_dict(self) -> dict:
        return {"is_proximate": self.is_proximate, "rho": self.rho.to_dict()}


@dataclass(frozen=True, eq=False)
class RhoTrack:
    xs: np.ndarray
    rho_m: np.ndarray
    rho_m_prime: np.ndarray


@dataclass(frozen=True, eq=False)
class EquivalenceReport:
    verdict_I: ProximateVerdict
    limit_3: LimitEstimate
    limit_4: LimitEstimate
    identity6_max_residual: float
    rho_agreement: Optional[float]
    limit_4_vanishes: bool
    agreement_tolerance: float
    theorem_consistent: bool

    @property
    def statement_II(self) -> bool:
        return _statement_ii(self.limit_3, self.limit_4_vanishes)

    def to_dict(self) -> dict:
        return {
            "verdict_I": self.verdict_I.to_dict(),
            "limit_3": self.limit_3.to_dict(),
            "limit_4": self.limit_4.to_dict(),
            "identity6_max_residual": float(self.identity6_max_residual),
            "rho_agreement": None if self.rho_agreement is None else float(self.rho_agreement),
            "agreement_tolerance": float(self.agreement_tolerance),
            "theorem_consistent": self.theorem_consistent,
        }


@dataclass(frozen=True, eq=False)
class ValironVerdict:
    is_valiron: bool
    rho: LimitEstimate
    x_rho_prime: LimitEstimate

    def to_dict(self) -> dict:
        return {
            "is_valiron": self.is_valiron,
            "rho": self.rho.to_dict(),
            "x_rho_prime": self.x_rho_prime.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class ValironBridgeReport:
    valiron: ValironVerdict
    proximate: ProximateVerdict
    rho_difference: Optional[float]
    agree: bool

    def to_dict(self) -> dict:
        return {
            "valiron": self.valiron.to_dict(),
            "proximate": self.proximate.to_dict(),
            "rho_difference": self.rho_difference,
            "agree": self.agree,
        }


def _settings(settings: Optional[LimitConfig]) -> LimitConfig:
    return settings or LimitConfig()


def _statement_ii(limit_3: LimitEstimate, limit_4_vanishes: bool) -> bool:
    return bool(limit_3.converged and limit_3.value >= 0 and limit_4_vanishes)


def _vanishes(est: LimitEstimate, tol: float) -> bool:
    return bool(est.converged and abs(est.value) <= max(tol, 3.0 * est.tail_residual))


def _profiles(V: FunctionSource, M: ModelLike, grid: Optional[GridSpec], numeric: bool) -> Tuple[Profile, Profile]:
    model = ensure_model(M, grid, numeric=numeric)
    xs = working_xs(grid, V, model.source)
    return profile(V, xs, numeric=numeric), profile(model.source, xs, numeric=numeric)


def restrict_to_positive_log(pV: Profile, pM: Profile, min_log: float) -> Tuple[Profile, Profile]:
    """Keep the points from the first x where ln M >= min_log on."""
    above = pM.ys >= min_log
    if not np.any(above):
        raise DomainError(
            f"ln {pM.label} stays below {min_log:g} on the grid; choose a larger x1"
        )
    mask = np.zeros(pM.xs.size, dtype=bool)
    mask[int(np.argmax(above)):] = True
    return pV.restrict(mask), pM.restrict(mask)


def _l1_values(pV: Profile, pM: Profile) -> np.ndarray:
    bad = ~(np.abs(pM.dys) > 0) | ~np.isfinite(pM.dys)
    if np.any(bad):
        x = float(pM.xs[int(np.argmax(bad))])
        raise SingularPointError(f"d ln {pM.label}/dx vanishes at x={x:.6g}", x=x)
    return pV.dys / pM.dys


def _rho_values(pV: Profile, pM: Profile) -> RhoTrack:
    bad = ~(pM.ys > 0)
    if np.any(bad):
        x = float(pM.xs[int(np.argmax(bad))])
        raise DomainError(f"ln {pM.label} <= 0 at x={x:.6g}; start the grid at a larger x0")
    rho = pV.ys / pM.ys
    # quotient rule on the profile derivatives, exact or numeric alike
    rho_prime = (pV.dys * pM.ys - pV.ys * pM.dys) / pM.ys ** 2
    return RhoTrack(pV.xs, rho, rho_prime)


def l1_track(V: FunctionSource, M: ModelLike, grid: Optional[GridSpec] = None, numeric: bool = False) -> Track:
    pV, pM = _profiles(V, M, grid, numeric)
    return Track(pV.xs, _l1_values(pV, pM))


def _verdict(xs: np.ndarray, l1: np.ndarray, settings: LimitConfig) -> ProximateVerdict:
    track = Track(xs, l1)
    rho = estimate_limit(track, settings)
    is_prox = bool(rho.converged and rho.value >= 0)
    return ProximateVerdict(is_prox, rho, track)


def check_proximate(
    V: FunctionSource,
    M: ModelLike,
    grid: Optional[GridSpec] = None,
    settings: Optional[LimitConfig] = None,
    numeric: bool = False,
) -> ProximateVerdict:
    """V is proximate relative to M when l1 converges to some rho >= 0."""
    pV, pM = _profiles(V, M, grid, numeric)
    verdict = _verdict(pV.xs, _l1_values(pV, pM), _settings(settings))
    logger.info(
        "check_proximate %s vs %s: %s (%s)",
        pV.label, pM.label, verdict.is_proximate, verdict.rho.status.value,
    )
    return verdict


def rho_track(V: FunctionSource, M: ModelLike, grid: Optional[GridSpec] = None, numeric: bool = False) -> RhoTrack:
    pV, pM = _profiles(V, M, grid, numeric)
    return _rho_values(pV, pM)


def _restricted(V, M, grid, numeric, cfg: Optional[Config]) -> Tuple[Profile, Profile]:
    cfg = cfg or Config()
    pV, pM = _profiles(V, M, grid, numeric)
    return restrict_to_positive_log(pV, pM, cfg.model.min_log_model)


def _limit4_values(rt: RhoTrack, pM: Profile) -> np.ndarray:
    return pM.ys * rt.rho_m_prime / pM.dys


def _identity6(l1: np.ndarray, rt: RhoTrack, pM: Profile) -> float:
    resid = l1 - rt.rho_m - (pM.ys / pM.dys) * rt.rho_m_prime
    return float(np.max(np.abs(resid[1:-1])))


def limits_3_and_4(
    V: FunctionSource,
    M: ModelLike,
    grid: Optional[GridSpec] = None,
    config: Optional[Config] = None,
    numeric: bool = False,
) -> Tuple[LimitEstimate, LimitEstimate]:
    """lim rho_M and lim (M/M') rho_M' ln M, on the part of the grid where ln M >= min_log_model."""
    cfg = config or Config()
    pV, pM = _restricted(V, M, grid, numeric, cfg)
    rt = _rho_values(pV, pM)
    limit_3 = estimate_limit(Track(rt.xs, rt.rho_m), cfg.limits)
    limit_4 = estimate_limit(Track(rt.xs, _limit4_values(rt, pM)), cfg.limits)
    return limit_3, limit_4


def identity6_residual(
    V: FunctionSource,
    M: ModelLike,
    grid: Optional[GridSpec] = None,
    config: Optional[Config] = None,
    numeric: bool = False,
) -> float:
    """Max interior |l1 - rho_M - (yM/dyM) rho_M'|."""
    pV, pM = _restricted(V, M, grid, numeric, config)
    return _identity6(_l1_values(pV, pM), _rho_values(pV, pM), pM)


def equivalence_report(
    V: FunctionSource,
    M: ModelLike,
    grid: Optional[GridSpec] = None,
    config: Optional[Config] = None,
    numeric: bool = False,
) -> EquivalenceReport:
    """Both characterizations of proximateness side by side, with the consistency verdict."""
    cfg = config or Config()
    lim_cfg = cfg.limits
    pV, pM = _restricted(V, M, grid, numeric, cfg)
    l1 = _l1_values(pV, pM)
    rt = _rho_values(pV, pM)

    verdict = _verdict(pV.xs, l1, lim_cfg)
    limit_3 = estimate_limit(Track(rt.xs, rt.rho_m), lim_cfg)
    limit_4 = estimate_limit(Track(rt.xs, _limit4_values(rt, pM)), lim_cfg)
    residual6 = _identity6(l1, rt, pM)
    vanishes = _vanishes(limit_4, lim_cfg.tol_limit)

    agreement = None
    tolerance = lim_cfg.agreement_tol
    if verdict.rho.converged and limit_3.converged:
        agreement = abs(verdict.rho.value - limit_3.value)
        tolerance = max(lim_cfg.agreement_tol, 3.0 * (verdict.rho.tail_residual + limit_3.tail_residual))

    statement_ii = _statement_ii(limit_3, vanishes)
    consistent = verdict.is_proximate == statement_ii
    if consistent and verdict.is_proximate:
        consistent = agreement is not None and agreement <= tolerance

    if not consistent:
        logger.warning(
            "Equivalence not observed for %s vs %s: (I)=%s (II)=%s agreement=%s",
            pV.label, pM.label, verdict.is_proximate, statement_ii, agreement,
        )
    return EquivalenceReport(
        verdict, limit_3, limit_4, residual6, agreement, vanishes, tolerance, bool(consistent)
    )


def check_valiron(
    rho_fn: FunctionSource,
    grid: Optional[GridSpec] = None,
    settings: Optional[LimitConfig] = None,
    numeric: bool = False,
) -> ValironVerdict:
    """rho(r) -> rho >= 0 and r rho'(r) ln r = x d rho/dx -> 0."""
    s = _settings(settings)
    xs = working_xs(grid, rho_fn)
    p = profile(rho_fn, xs, numeric=numeric)
    negative = p.ys < 0
    if np.any(negative):
        x = float(xs[int(np.argmax(negative))])
        raise PreconditionError(f"rho is negative at x={x:.6g}")
    rho = estimate_limit(Track(xs, p.ys), s)
    second = estimate_limit(Track(xs, xs * p.dys), s)
    is_valiron = bool(rho.converged and rho.value >= 0 and _vanishes(second, s.tol_limit))
    logger.info("check_valiron %s: %s", p.label, is_valiron)
    return ValironVerdict(is_valiron, rho, second)


def valiron_bridge(
    rho_fn: FunctionSource,
    grid: Optional[GridSpec] = None,
    settings: Optional[LimitConfig] = None,
    numeric: bool = False,
) -> ValironBridgeReport:
    """V(r) = r^rho(r) is proximate relative to M(r) = r exactly when rho is a Valiron order."""
    s = _settings(settings)
    valiron = check_valiron(rho_fn, grid, s, numeric)
    prox = check_proximate(order_as_growth(rho_fn), id_family(), grid, s, numeric)

    difference = None
    agree = valiron.is_valiron == prox.is_proximate
    if valiron.is_valiron and prox.is_proximate:
        difference = abs(valiron.rho.value - prox.rho.value)
        tol = max(s.agreement_tol, 3.0 * (valiron.rho.tail_residual + prox.rho.tail_residual))
        agree = difference <= tol
    if not agree:
        logger.warning("Valiron bridge disagrees for %s", rho_fn.label)
    return ValironBridgeReport(valiron, prox, difference, bool(agree))
