import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stdmap_lyap.dynamics import (
    MapSpec, TorusPoint, map_inverse, map_step, orbit, orbit_arrays, step_arrays,
    tangent_lyapunov, tangent_lyapunov_arrays, tangent_step, torus_dist, uniform_points,
    wrap,
)

unit = st.floats(0.0, 1.0, exclude_max=True, allow_nan=False)


@pytest.mark.parametrize("p, lam, expected", [
    ((0.0, 0.0), 3.0, (0.0, 0.0)),
    ((0.5, 0.25), 2.0, (0.75, 0.5)),
    ((0.25, 0.0), 1.0, (0.5, 0.25)),
])
def test_map_step_examples(p, lam, expected):
    q = map_step(TorusPoint(*p), MapSpec.standard(lam))
    assert torus_dist(q, TorusPoint(*expected)) < 1e-12


def test_rotation_step():
    q = map_step(TorusPoint(0.9, 0.3), MapSpec.rotation(0.25))
    assert q.x == pytest.approx(0.15) and q.y == 0.3


@pytest.mark.parametrize("p, lam, expected", [
    ((0.0, 0.0), 3.0, (0.0, 0.0)),
    ((0.5, 0.25), 1.0, (0.25, 0.0)),
])
def test_map_inverse_examples(p, lam, expected):
    q = map_inverse(TorusPoint(*p), MapSpec.standard(lam))
    assert torus_dist(q, TorusPoint(*expected)) < 1e-12


@pytest.mark.parametrize("lam", [1.0, 5.0, 6.0, 7.0])
def test_inverse_round_trip(lam):
    rng = np.random.default_rng(3)
    m = MapSpec.standard(lam)
    for x, y in rng.random((1000, 2)):
        p = TorusPoint(x, y)
        assert torus_dist(map_inverse(map_step(p, m), m), p) < 1e-12


@given(unit, unit, st.floats(0.1, 20.0))
def test_step_stays_on_torus(x, y, lam):
    q = map_step(TorusPoint(x, y), MapSpec.standard(lam))
    assert 0.0 <= q.x < 1.0 and 0.0 <= q.y < 1.0


def test_wrap_never_returns_one():
    assert wrap(-1e-18) == 0.0
    arr = wrap(np.array([-1e-18, 1.0, 2.5, -0.25]))
    assert np.all((arr >= 0) & (arr < 1))
    assert arr.tolist() == [0.0, 0.0, 0.5, 0.75]


def test_mapspec_validation():
    with pytest.raises(ValueError):
        MapSpec.standard(0.0)
    with pytest.raises(ValueError):
        MapSpec.rotation(0.0)
    with pytest.raises(ValueError):
        MapSpec("tent", 1.0)


def test_tangent_examples():
    np.testing.assert_allclose(tangent_step(TorusPoint(0.25, 0.7), 4.2), [[2, -1], [1, 0]],
                               atol=1e-12)
    np.testing.assert_allclose(tangent_step(TorusPoint(0.0, 0.0), 1.0),
                               [[2 + 2 * math.pi, -1], [1, 0]])


@given(unit, unit, st.floats(0.1, 50.0))
def test_tangent_unimodular(x, y, lam):
    J = tangent_step(TorusPoint(x, y), lam)
    assert abs(np.linalg.det(J) - 1.0) <= 1e-12 * max(1.0, abs(J[0, 0]))


def test_tangent_matches_finite_differences():
    m = MapSpec.standard(3.0)
    p = np.array([0.31, 0.42])
    h = 1e-6
    cols = []
    for e in np.eye(2):
        plus = np.array(step_arrays(*(p + h * e), m))
        minus = np.array(step_arrays(*(p - h * e), m))
        cols.append((plus - minus) / (2 * h))
    np.testing.assert_allclose(np.column_stack(cols), tangent_step(TorusPoint(*p), 3.0),
                               rtol=1e-6)


def test_orbit_examples():
    fixed = orbit(TorusPoint(0.0, 0.0), MapSpec.standard(5.0), 0, 10)
    assert fixed == [TorusPoint(0.0, 0.0)] * 11
    rot = orbit(TorusPoint(0.0, 0.3), MapSpec.rotation(0.618034), 0, 1)
    assert rot[1].x == pytest.approx(0.618034) and rot[1].y == 0.3
    assert orbit(TorusPoint(0.2, 0.3), MapSpec.standard(1.0), 0, 0) == [TorusPoint(0.2, 0.3)]


def test_orbit_index_convention_and_consistency():
    rng = np.random.default_rng(0)
    m = MapSpec.standard(6.0)
    for x, y in rng.random((20, 2)):
        p0 = TorusPoint(x, y)
        two_sided = orbit(p0, m, -5, 5)
        assert two_sided[5] == p0
        assert torus_dist(map_step(two_sided[4], m), p0) < 1e-12
        fwd = orbit(p0, m, 0, 30)
        for a, b in zip(fwd, fwd[1:]):
            assert map_step(a, m) == b
    xs, ys = orbit_arrays(TorusPoint(0.1, 0.2), m, 3, 7)
    ref = orbit(TorusPoint(0.1, 0.2), m, 0, 7)[3:]
    assert xs.tolist() == [p.x for p in ref]


def test_orbit_rejects_reversed_range():
    with pytest.raises(ValueError):
        orbit(TorusPoint(0, 0), MapSpec.standard(1.0), 2, 1)


def test_measure_preservation():
    # 32 x 32 occupancy after one step, each cell within 5 sigma of multinomial
    rng = np.random.default_rng(11)
    n = 1_000_000
    x, y = step_arrays(rng.random(n), rng.random(n), MapSpec.standard(6.0))
    counts, _, _ = np.histogram2d(x, y, bins=32, range=[[0, 1], [0, 1]])
    p = 1 / 1024
    sigma = math.sqrt(n * p * (1 - p))
    assert np.max(np.abs(counts - n * p)) < 5 * sigma


def test_uniform_points_are_stream_split():
    x, y = uniform_points(42, 10)
    x2, y2 = uniform_points(42, 4, start=6)
    assert x[6:].tolist() == x2.tolist() and y[6:].tolist() == y2.tolist()
    assert np.all((x >= 0) & (x < 1))


def test_tangent_lyapunov_fixed_point():
    t = 2 + 2 * math.pi
    expected = math.log((t + math.sqrt(t * t - 4)) / 2)
    assert expected == pytest.approx(2.0994, abs=1e-4)
    assert tangent_lyapunov(TorusPoint(0.0, 0.0), 1.0, 10_000) == pytest.approx(expected, abs=1e-3)


def test_tangent_lyapunov_chirikov_estimate():
    # oracle: Monte Carlo average of log|2 pi lam cos 2 pi x| over uniform x
    lam = 6.0
    u = np.random.default_rng(5).random(2_000_000)
    oracle = float(np.mean(np.log(np.abs(2 * math.pi * lam * np.cos(2 * math.pi * u)))))
    assert oracle == pytest.approx(math.log(math.pi * lam), abs=0.01)

    x, y = uniform_points(1, 1000)
    med = float(np.median(tangent_lyapunov_arrays(x, y, lam, 10_000)))
    assert abs(med / oracle - 1) < 0.1
    assert np.all(tangent_lyapunov_arrays(x[:50], y[:50], 0.3, 50) >= 0)
