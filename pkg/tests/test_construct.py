import numpy as np
import pytest

from src.config import Config
from src.core import GridSpec, compose_family, read_sample_csv
from src.construct import construct_proximate, order_estimate, upper_hull
from src.errors import DegenerateGridError, InfiniteOrderError, PreconditionError
from src.families.growth import (
    expo_family,
    id_family,
    inv1p_family,
    log_family,
    oscslow_family,
    pow_family,
    sqrtlog_family,
)

XS = np.linspace(1.0, 1.0e4, 4096)


@pytest.fixture
def crest_config() -> Config:
    cfg = Config()
    cfg.construct.order_tail_fraction = 0.9
    return cfg


@pytest.fixture
def max_type_csv(write_csv):
    """Increasing max of two lines, in log coordinates over s = ln M."""
    def _make(model: str):
        if model == "id":
            ys = np.maximum(2.0 * XS + 800.0, 2.5 * XS + 200.0)
        else:
            s = np.log(XS)
            ys = np.maximum(2.0 * s + 4.0, 2.5 * s + 1.0)
        return read_sample_csv(write_csv(f"maxtype_{model}.csv", x=XS, y=ys))
    return _make


def test_upper_hull_of_points():
    s = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    y = np.array([0.0, 3.0, 2.0, 3.5, 0.0])
    np.testing.assert_array_equal(upper_hull(s, y), [0, 1, 3, 4])


def test_order_of_square(default_grid):
    est = order_estimate(pow_family(2.0), id_family(), default_grid)
    assert est.finite
    assert est.rho_star == pytest.approx(2.0, abs=1e-9)


def test_order_needs_a_crest_in_the_window(default_grid, crest_config):
    est = order_estimate(oscslow_family(2.0, 1.0), id_family(), default_grid, crest_config)
    assert est.rho_star == pytest.approx(3.0, abs=2e-2)
    assert est.lower.extremum < est.rho_star


def test_exponential_has_infinite_order():
    with pytest.raises(InfiniteOrderError):
        order_estimate(expo_family(1.0), id_family())
    with pytest.raises(InfiniteOrderError):
        construct_proximate(expo_family(1.0), id_family())


def test_order_requires_increasing_function(default_grid):
    with pytest.raises(PreconditionError):
        order_estimate(inv1p_family(), id_family(), default_grid)


def test_square_is_reproduced(default_grid):
    result = construct_proximate(pow_family(2.0), id_family(), default_grid)
    assert result.success
    np.testing.assert_allclose(result.v.ys, 2.0 * result.v.xs, atol=1e-8)
    assert result.q_upper == pytest.approx(1.0)
    assert result.touch_indices.size == result.v.xs.size
    assert result.proximate.rho.value == pytest.approx(2.0)
    assert result.tail_gap <= 1e-8


def _check_success(result, cfg: Config):
    assert result.success, result.to_dict()
    assert result.q_upper <= 1.0 + cfg.construct.construct_tol
    assert result.q_touch >= 1.0 - cfg.construct.construct_tol
    assert result.proximate.is_proximate
    tol = max(2e-2, 3 * result.proximate.rho.tail_residual)
    assert abs(result.proximate.rho.value - result.rho_star) <= tol

    # majorization, hull slopes, terminal slope
    assert np.all(result.v.ys >= result.ln_a - 1e-12)
    assert np.all(np.diff(result.tail_slopes) <= 1e-9 * max(1.0, result.rho_star))
    assert result.tail_slopes[-1] == pytest.approx(result.rho_star, abs=1e-9 * max(1.0, result.rho_star))
    half = result.v.xs >= result.v.xs[0] + 0.5 * (result.v.xs[-1] - result.v.xs[0])
    assert np.any(half[result.touch_indices])


@pytest.mark.parametrize("model", ["id", "log"])
@pytest.mark.parametrize("outer", [pow_family(2.0), oscslow_family(2.0, 1.0), sqrtlog_family()],
                         ids=lambda f: f.label)
def test_construction_succeeds(default_grid, crest_config, model, outer):
    M = id_family() if model == "id" else log_family()
    A = outer if model == "id" else compose_family(outer, M)
    result = construct_proximate(A, M, default_grid, crest_config)
    _check_success(result, crest_config)


@pytest.mark.parametrize("model", ["id", "log"])
def test_construction_from_sampled_max_type(max_type_csv, model):
    cfg = Config()
    M = id_family() if model == "id" else log_family()
    result = construct_proximate(max_type_csv(model), M, config=cfg)
    _check_success(result, cfg)


def test_oscillating_order_touches_at_crest_level(default_grid, crest_config):
    result = construct_proximate(oscslow_family(2.0, 1.0), id_family(), default_grid, crest_config)
    assert result.rho_star == pytest.approx(3.0, abs=2e-2)
    assert result.proximate.rho.value == pytest.approx(3.0, abs=2e-2)


def test_too_few_points_rejected():
    with pytest.raises(DegenerateGridError):
        construct_proximate(pow_family(2.0), id_family(), GridSpec(1.0, 10.0, 40))


def test_result_exports(default_grid):
    result = construct_proximate(sqrtlog_family(), id_family(), default_grid)
    frame = result.to_frame()
    assert list(frame.columns) == ["x", "lnA", "lnV", "rho_m"]
    assert len(frame) == default_grid.n
    out = result.to_dict()
    assert set(out) >= {"rho_star", "rho", "q_upper", "q_touch", "touch_count", "success"}
    assert out["touch_count"] >= 1
