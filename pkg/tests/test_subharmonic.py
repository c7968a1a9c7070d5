import numpy as np
import pytest

from src.errors import PreconditionError, SingularityError, UnboundedOnCircleError
from src.families.plane import (
    PlaneFunction,
    abssq,
    logabs,
    logshift,
    max_plane,
    maxshift,
    posre,
    re,
    rotate,
)
from src.model import validate_model
from src.subharmonic import (
    Normalization,
    circle_mean,
    disk_mean,
    export_component,
    means_series,
    sup_on_circle,
)

RADII = np.exp(np.linspace(0.25, 3.0, 64))
CATALOG = [logabs(), logshift(0.5), abssq(), re(), posre(), maxshift(1.0), maxshift(0.5)]


@pytest.mark.parametrize("r", [0.1, 1.0, 7.5, 1.0e3])
def test_circle_mean_of_log_modulus(r):
    assert circle_mean(logabs(), r) == pytest.approx(np.log(r), abs=1e-12)
    assert circle_mean(re(), r) == pytest.approx(0.0, abs=1e-12)


def test_circle_mean_of_shifted_log():
    assert circle_mean(logshift(1.0), 2.0, n_quad=512) == pytest.approx(np.log(2.0), abs=1e-8)


def test_circle_through_a_pole_offsets_nodes():
    value = circle_mean(logshift(2.0), 2.0, n_quad=512)
    assert np.isfinite(value)
    assert value == pytest.approx(np.log(2.0), abs=2e-3)


def test_circle_mean_errors():
    with pytest.raises(PreconditionError):
        circle_mean(logabs(), 1.0, n_quad=100)
    with pytest.raises(PreconditionError):
        circle_mean(logabs(), 0.0)
    bad = PlaneFunction("bad", lambda z: np.log(np.real(z)))
    with pytest.raises(SingularityError) as exc:
        circle_mean(bad, 1.0)
    assert exc.value.angle is not None


def test_quadrature_converges_geometrically():
    exact = np.log(2.0)
    errors = [abs(circle_mean(logshift(1.5), 2.0, n_quad=n) - exact) for n in (16, 32, 64)]
    assert errors[0] >= 4 * errors[1]
    assert errors[1] >= 4 * errors[2]


SMOOTH_CATALOG = [logabs(), logshift(0.5), abssq(), re()]


@pytest.mark.parametrize("u", SMOOTH_CATALOG, ids=lambda u: u.label)
def test_circle_mean_is_rotation_invariant(u):
    assert circle_mean(rotate(u, 0.7), 2.0) == pytest.approx(circle_mean(u, 2.0), abs=1e-12)


@pytest.mark.parametrize("r", [0.5, 2.0, 10.0])
def test_disk_mean_of_squared_modulus(r):
    assert disk_mean(abssq(), r) == pytest.approx(r ** 2 / 2, rel=1e-10)
    assert disk_mean(abssq(), r, Normalization.PAPER) == pytest.approx(r ** 2 / (2 * np.pi), rel=1e-10)
    assert disk_mean(re(), r) == pytest.approx(0.0, abs=1e-10)
    assert disk_mean(re(), r, "paper") == pytest.approx(0.0, abs=1e-10)


def test_disk_mean_of_log_modulus():
    r = 5.0
    assert disk_mean(logabs(), r) == pytest.approx(np.log(r) - 0.5, abs=1e-3)


def test_disk_mean_splits_at_pole_radius():
    r = 3.0
    expected = np.log(r) - 0.5 + 0.125 / r ** 2
    assert disk_mean(logshift(0.5), r) == pytest.approx(expected, abs=1e-5)


def test_sup_on_circle():
    assert sup_on_circle(re(), 3.0) == pytest.approx(3.0, abs=1e-12)
    assert sup_on_circle(logshift(1.0), 2.0) == pytest.approx(np.log(3.0), abs=1e-10)
    assert sup_on_circle(logabs(), 4.0) == pytest.approx(np.log(4.0), abs=1e-12)


def test_sup_refines_between_scan_nodes():
    u = rotate(re(), 0.001)
    assert sup_on_circle(u, 2.0, n_scan=64) == pytest.approx(2.0, abs=1e-9)


def test_sup_on_circle_through_unbounded_point():
    u = PlaneFunction("spike", lambda z: -np.log(np.abs(z - 2.0)), unbounded_points=(2 + 0j,))
    with pytest.raises(UnboundedOnCircleError):
        sup_on_circle(u, 2.0)


def test_means_of_log_modulus():
    series = means_series(logabs(), np.exp(np.arange(1.0, 11.0)))
    np.testing.assert_allclose(series.c, np.arange(1.0, 11.0), atol=1e-12)
    np.testing.assert_allclose(series.m, np.arange(1.0, 11.0), atol=1e-12)


def test_means_of_squared_modulus():
    series = means_series(abssq(), RADII)
    np.testing.assert_allclose(series.c, RADII ** 2, rtol=1e-12)
    assert np.all(np.diff(series.c) > 0)


@pytest.mark.parametrize("u", CATALOG, ids=lambda u: u.label)
def test_means_are_ordered_increasing_and_log_convex(u):
    series = means_series(u, RADII)
    assert np.all(series.b <= series.c + 1e-10)
    assert np.all(series.c <= series.m + 1e-10)
    for values in (series.c, series.b, series.m):
        assert np.all(np.diff(values) >= -1e-8)
        assert np.all(np.diff(values, 2) >= -1e-8)


def test_means_reject_bad_radii():
    with pytest.raises(PreconditionError):
        means_series(logabs(), [2.0, 1.0])
    with pytest.raises(PreconditionError):
        means_series(logabs(), [0.0, 1.0])


def test_exported_circle_mean_is_a_model():
    series = means_series(logabs(), np.exp(np.linspace(1.0, 10.0, 64)))
    candidate = export_component(series, "c")
    np.testing.assert_allclose(candidate.ys, np.log(np.log(series.rs)), atol=1e-12)
    assert validate_model(candidate).passing


def test_export_needs_positive_values():
    radii = np.exp(np.linspace(-3.0, -1.0, 16))
    with pytest.raises(PreconditionError):
        export_component(means_series(logabs(), radii), "c")
    shifted = means_series(logabs(), radii, shift=5.0)
    assert shifted.shift == 5.0
    assert len(export_component(shifted, "m")) == 16


def test_series_frame_columns():
    frame = means_series(abssq(), RADII[:8]).to_frame()
    assert list(frame.columns) == ["r", "c", "b", "m", "normalization"]
    assert set(frame["normalization"]) == {"area"}


def test_export_shift_lifts_values():
    radii = np.exp(np.linspace(-3.0, -1.0, 16))
    sample = export_component(means_series(logabs(), radii), "c", shift=5.0)
    np.testing.assert_allclose(sample.ys, np.log(np.log(radii) + 5.0), atol=1e-12)


def test_max_keeps_only_shared_poles():
    u = max_plane(logabs(), logshift(1.0))
    assert u.log_poles == ()
    assert u.value(1.0, 0.0) == pytest.approx(0.0)
    both = max_plane(logabs(), rotate(logabs(), 0.3))
    assert both.log_poles == (0j,)


def test_means_of_max_of_logs():
    u = maxshift(1.0)
    assert u.log_poles == ()
    # nodes land on the kink, and the sup sits at t = 0
    assert np.isfinite(circle_mean(u, 1.0))
    assert sup_on_circle(u, 3.0) == pytest.approx(np.log(4.0), abs=1e-10)
    assert circle_mean(u, 3.0) > np.log(3.0)
    assert circle_mean(u, 3.0) >= circle_mean(logshift(1.0), 3.0)
