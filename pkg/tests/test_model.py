import numpy as np
import pytest

from src.core import GridSpec, LogLogSample, sample
from src.errors import ModelValidationError
from src.families.growth import (
    expo_family,
    gauss_family,
    id_family,
    inv1p_family,
    log_family,
    make_family,
    oscmodel_family,
    powlog_family,
)
from src.model import ModelGrowth, is_model_subharmonic_radial, require_model, validate_model


@pytest.mark.parametrize(
    "model",
    [id_family(), log_family(), expo_family(1.0), expo_family(0.5), powlog_family(1.0, 1.0),
     powlog_family(2.0, 0.0), oscmodel_family()],
    ids=lambda f: f.label,
)
def test_documented_models_pass(model):
    report = validate_model(model)
    assert report.passing, report.to_dict()
    assert report.witnesses == ()


def test_decreasing_bounded_function_fails_with_witnesses(default_grid):
    report = validate_model(inv1p_family(), default_grid)
    assert not report.passing
    assert not report.derivative_positive
    assert not report.divergent
    clauses = {w.clause for w in report.witnesses}
    assert {"derivative_positive", "divergent"} <= clauses


def test_concave_in_x_candidate_fails_convexity():
    grid = GridSpec(-3.0, 3.0, 256)
    report = validate_model(gauss_family(), grid)
    assert not report.log_convex
    assert any(w.clause == "log_convex" for w in report.witnesses)
    assert not is_model_subharmonic_radial(gauss_family(), grid)


def test_subharmonic_radial_models(default_grid):
    assert is_model_subharmonic_radial(id_family(), default_grid)
    assert is_model_subharmonic_radial(oscmodel_family(), default_grid)


def test_witnesses_are_capped(default_grid, config):
    config.model.max_witnesses = 3
    report = validate_model(inv1p_family(), default_grid, config.model)
    assert sum(w.clause == "derivative_positive" for w in report.witnesses) == 3


def test_decreasing_sample_fails():
    xs = np.linspace(1.0, 100.0, 128)
    report = validate_model(LogLogSample(xs, -xs))
    assert not report.passing
    assert report.to_dict()["scope"] == "sampled ray only"


def test_report_json_shape(default_grid):
    out = validate_model(log_family(), default_grid).to_dict()
    assert out["passing"] is True
    assert set(out["clauses"]) == {"positive", "derivative_positive", "log_convex", "divergent"}
    assert out["sampled_ray"] == [1.0, 1.0e4]


def test_model_growth_only_from_passing_report(default_grid):
    model = require_model(id_family(), default_grid)
    assert isinstance(model, ModelGrowth)
    with pytest.raises(ModelValidationError) as exc:
        require_model(inv1p_family(), default_grid)
    assert exc.value.report is not None
    failing = validate_model(inv1p_family(), default_grid)
    with pytest.raises(ModelValidationError):
        ModelGrowth(inv1p_family(), failing)


def test_numeric_validation_agrees_on_sampled_models(default_grid):
    for name in ("id", "log", "oscmodel"):
        s = sample(make_family(name), default_grid)
        assert validate_model(s).passing


@pytest.mark.parametrize("x1", [10.0, 50.0, 1.0e3])
@pytest.mark.parametrize("n", [33, 40, 57, 100, 300])
def test_identity_model_passes_on_short_grids(x1, n):
    report = validate_model(id_family(), GridSpec(1.0, x1, n))
    assert report.divergent, report.to_dict()
    assert report.passing
