import numpy as np
import pytest

from src.asymptotics import (
    LhopitalCase,
    LimitEstimate,
    LimitStatus,
    estimate_liminf,
    estimate_limit,
    estimate_limsup,
    verify_lhopital,
)
from src.core import Track
from src.errors import PreconditionError, TrackTooShortError
from src.families.growth import (
    id_family,
    log_family,
    pow_family,
    powlog_family,
    recip_family,
    sqrtlog_family,
)

XS = np.linspace(1.0, 1.0e4, 4096)


def track(values) -> Track:
    return Track(XS, np.broadcast_to(values, XS.shape))


def test_limit_of_reciprocal_decay():
    est = estimate_limit(track(3 + 2 / XS))
    assert est.status is LimitStatus.CONVERGED
    assert est.value == pytest.approx(3.0, abs=1e-3)
    assert est.window[1] == pytest.approx(1.0e4)


def test_limit_of_constant():
    est = estimate_limit(track(2.0))
    assert est.converged
    assert est.value == 2.0
    assert est.tail_residual == 0.0


def test_limit_of_cosine_oscillates():
    assert estimate_limit(track(np.cos(XS))).status is LimitStatus.OSCILLATING


def test_limit_of_logarithm_diverges():
    assert estimate_limit(track(np.log(XS))).status is LimitStatus.DIVERGED


def test_limit_of_positive_infinity_diverges():
    values = 3 + 2 / XS
    values[-5:] = np.inf
    assert estimate_limit(track(values)).status is LimitStatus.DIVERGED


@pytest.mark.parametrize("c", [-10.0, -3.0, 0.0, 3.0, 10.0])
@pytest.mark.parametrize("a", [-10.0, -1.0, 0.0, 1.0, 10.0])
def test_limit_error_bounded_by_tail_quarter_decay(a, c):
    est = estimate_limit(track(c + a / XS))
    assert est.converged
    x_quarter = XS[-1] - 0.25 * (XS[-1] - XS[0])
    assert abs(est.value - c) <= abs(a) / x_quarter + 1e-12


def test_short_track_rejected():
    with pytest.raises(TrackTooShortError):
        estimate_limit(Track(np.arange(20.0), np.ones(20)))


def test_limsup_needs_a_crest_in_the_window(wide_window):
    est = estimate_limsup(track(2 + np.sin(np.log(XS))), wide_window)
    assert est.converged
    assert est.value == pytest.approx(3.0, abs=2e-2)


def test_limsup_of_constant_and_logarithm():
    est = estimate_limsup(track(5.0))
    assert est.value == 5.0 and est.tail_residual == 0.0
    assert estimate_limsup(track(np.log(XS))).status is LimitStatus.DIVERGED


def test_limsup_dominates_limit():
    values = track(3 + 2 / XS)
    assert estimate_limsup(values).value >= estimate_limit(values).value
    assert estimate_liminf(values).value <= estimate_limit(values).value


def test_estimate_value_invariant():
    with pytest.raises(ValueError):
        LimitEstimate(LimitStatus.OSCILLATING, 0.1, (0.0, 1.0), value=1.0)
    with pytest.raises(ValueError):
        LimitEstimate(LimitStatus.CONVERGED, 0.1, (0.0, 1.0))


def test_estimate_json_shape():
    out = estimate_limit(track(np.cos(XS))).to_dict()
    assert set(out) == {"status", "tail_residual", "window"}
    out = estimate_limit(track(2.0)).to_dict()
    assert out["value"] == 2.0


LHOPITAL_PAIRS = [
    (recip_family(1.0, 1.0), id_family(), 0.0),
    (id_family(), id_family(), 1.0),
    (powlog_family(3.0, 2.0), id_family(), 3.0),
    (pow_family(2.0), powlog_family(1.0, 1.0), 2.0),
    (sqrtlog_family(), id_family(), 0.0),
    (log_family(), id_family(), 0.0),
]


@pytest.mark.parametrize("f, g, expected", LHOPITAL_PAIRS, ids=lambda v: getattr(v, "label", str(v)))
def test_lhopital_pairs(default_grid, f, g, expected):
    report = verify_lhopital(LhopitalCase(f, g, expected), default_grid)
    assert report.precondition.status is LimitStatus.DIVERGED
    assert report.derivative_ratio.converged
    assert report.value_ratio.converged
    assert report.passed
    assert report.matches_expected


def test_lhopital_bounded_numerator(default_grid):
    report = verify_lhopital(LhopitalCase(recip_family(1.0, 1.0), id_family()), default_grid)
    assert report.derivative_ratio.value == pytest.approx(0.0, abs=1e-6)
    assert report.value_ratio.value == pytest.approx(0.0, abs=1e-3)
    assert report.to_dict()["passed"] is True


def test_lhopital_requires_divergent_denominator(default_grid):
    with pytest.raises(PreconditionError):
        verify_lhopital(LhopitalCase(id_family(), recip_family(1.0, 1.0)), default_grid)


@pytest.mark.parametrize("n", [33, 40, 41, 47])
def test_linear_growth_diverges_with_uneven_eighths(n):
    xs = np.linspace(1.0, 10.0, n)
    assert estimate_limit(Track(xs, xs)).status is LimitStatus.DIVERGED


def test_lhopital_tolerance_has_a_floor(default_grid, config):
    report = verify_lhopital(LhopitalCase(recip_family(1.0, 1.0), id_family()), default_grid, config.limits)
    combined = 3.0 * (report.derivative_ratio.tail_residual + report.value_ratio.tail_residual)
    assert report.tolerance == max(config.limits.tol_limit, combined)
    assert report.difference > combined
    assert report.passed
