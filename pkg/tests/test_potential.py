import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stdmap_lyap.dynamics import MapSpec, TorusPoint, orbit
from stdmap_lyap.potential import (
    PotentialWindow, SamplingFunction, near_recurrences, omega_limit_witness,
    recurrence_found, sample_potential, shift, shift_metric, truncation_bound,
)

ALPHA = 0.618034


def window(n_from, values):
    return PotentialWindow(n_from, np.asarray(values, dtype=float))


def test_sample_potential_examples():
    V = sample_potential(TorusPoint(0, 0), MapSpec.standard(5), SamplingFunction.cosine(), 0, 4)
    assert V.values.tolist() == [1.0] * 5

    const = sample_potential(TorusPoint(0.3, 0.4), MapSpec.standard(7), SamplingFunction(c0=2),
                             -3, 3)
    assert const.values.tolist() == [2.0] * 7 and const.n_from == -3

    quarter = sample_potential(TorusPoint(0, 0.25), MapSpec.rotation(0.25),
                               SamplingFunction.cosine(), 0, 3)
    np.testing.assert_allclose(quarter.values, [1, 0, -1, 0], atol=1e-12)


def test_sample_potential_index_zero_is_phi_x0():
    phi = SamplingFunction(0.1, 0.2, -0.3, 0.4, 0.5)
    p = TorusPoint(0.37, 0.81)
    V = sample_potential(p, MapSpec.standard(6), phi, -4, 4)
    assert V[0] == pytest.approx(float(phi(p.x, p.y)))
    pts = orbit(p, MapSpec.standard(6), -4, 4)
    np.testing.assert_array_equal(V.values, [float(phi(q.x, q.y)) for q in pts])


def test_sample_potential_bounded_by_sup():
    rng = np.random.default_rng(2)
    phi = SamplingFunction(0.3, 1.0, -0.5, 0.25, 0.7)
    for x, y in rng.random((1000, 2)):
        V = sample_potential(TorusPoint(x, y), MapSpec.standard(6), phi, 0, 20)
        assert np.max(np.abs(V.values)) <= phi.sup_bound + 1e-12


def test_shift_examples():
    V = window(0, [1, 2, 3])
    same = shift(V, 0)
    assert same.n_from == V.n_from and np.array_equal(same.values, V.values)
    S = shift(V, 1)
    assert (S.n_from, S.n_to) == (-1, 1)
    assert S[0] == V[1] == 2


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_shift_group_law(a, b):
    V = window(3, np.arange(10.0))
    lhs, rhs = shift(shift(V, a), b), shift(V, a + b)
    assert lhs.n_from == rhs.n_from and np.array_equal(lhs.values, rhs.values)


def test_shift_equivariance():
    # sampling over [a + k, b + k] then shifting by k equals sampling the shifted orbit
    m, phi, p = MapSpec.standard(6), SamplingFunction.cosine(), TorusPoint(0.2, 0.7)
    k = 4
    moved = shift(sample_potential(p, m, phi, -2 + k, 5 + k), k)
    q = orbit(p, m, k, k)[0]
    direct = sample_potential(q, m, phi, -2, 5)
    assert moved.n_from == direct.n_from
    np.testing.assert_allclose(moved.values, direct.values, atol=1e-9)


def test_shift_metric_examples():
    V = window(-8, np.zeros(17))
    delta0 = window(-8, (np.arange(-8, 9) == 0).astype(float))
    delta_m1 = window(-8, (np.arange(-8, 9) == -1).astype(float))
    assert shift_metric(V, V) == 0.0
    assert shift_metric(delta0, V) == 1.0
    assert shift_metric(delta0, delta_m1) == 1.5


def test_shift_metric_requires_overlap():
    with pytest.raises(ValueError):
        shift_metric(window(0, [1, 2]), window(5, [1]))


@given(st.lists(st.floats(-3, 3), min_size=9, max_size=9),
       st.lists(st.floats(-3, 3), min_size=9, max_size=9),
       st.lists(st.floats(-3, 3), min_size=9, max_size=9))
def test_shift_metric_is_pseudometric(a, b, c):
    A, B, C = window(-4, a), window(-4, b), window(-4, c)
    assert shift_metric(A, B) == shift_metric(B, A)
    assert shift_metric(A, C) <= shift_metric(A, B) + shift_metric(B, C) + 1e-12
    assert shift_metric(A, A) == 0.0


def test_truncation_bound():
    # oracle: the tail sum of 2^{-|n|} over |n| > K is 2 * 2^{-K}
    C, K = 1.5, 6
    tail = 2 * C * 2 * sum(2.0 ** -n for n in range(K + 1, 80))
    assert truncation_bound(C, K) == pytest.approx(tail)


def test_near_recurrences_fixed_point():
    events = near_recurrences(TorusPoint(0, 0), MapSpec.standard(4), 1e-6, 10)
    assert [e.time for e in events] == list(range(1, 11))
    assert all(e.distance == 0 for e in events)


def test_near_recurrences_golden_rotation():
    events = near_recurrences(TorusPoint(0, 0.3), MapSpec.rotation(ALPHA), 0.05, 100)
    found = {e.time: e.distance for e in events}
    # oracle: scalar distance of n * alpha to the nearest integer
    for n in range(1, 101):
        frac = (n * ALPHA) % 1.0
        d = min(frac, 1 - frac)
        assert (n in found) == (d < 0.05)
        if n in found:
            assert found[n] == pytest.approx(d, abs=1e-12)
    assert found[13] == pytest.approx(0.0344, abs=1e-4)
    assert found[21] == pytest.approx(0.0213, abs=1e-4)
    assert [e.time for e in events] == sorted(found)
    assert all(e.distance < 0.05 for e in events)


def test_near_recurrences_zero_delta():
    assert near_recurrences(TorusPoint(0.123, 0.456), MapSpec.standard(6), 0.0, 200) == []


def test_recurrence_found_agrees_with_scan():
    rng = np.random.default_rng(8)
    x, y = rng.random(20), rng.random(20)
    m = MapSpec.standard(6)
    found = recurrence_found(x, y, m, 0.1, 300)
    for i in range(20):
        assert found[i] == bool(near_recurrences(TorusPoint(x[i], y[i]), m, 0.1, 300))


def test_omega_witness_fixed_point():
    m = MapSpec.standard(3)
    events = near_recurrences(TorusPoint(0, 0), m, 1e-3, 5)
    W, defects = omega_limit_witness(TorusPoint(0, 0), m, SamplingFunction.cosine(), events, 4)
    assert (W.n_from, W.n_to) == (-4, 4)
    assert defects == [0.0] * 5


def test_omega_witness_rotation_bound_and_monotonicity():
    p, m, phi = TorusPoint(0, 0.3), MapSpec.rotation(ALPHA), SamplingFunction.cosine()
    events = near_recurrences(p, m, 0.05, 100)
    ev13 = [e for e in events if e.time == 13]
    W, (d13,) = omega_limit_witness(p, m, phi, ev13, 8)
    # oracle: direct sum of |cos 2pi(x + (13 + k) a) - cos 2pi(x + k a)| 2^{-|k|}
    direct = sum(2.0 ** -abs(k) * abs(math.cos(2 * math.pi * (13 + k) * ALPHA)
                                      - math.cos(2 * math.pi * k * ALPHA))
                 for k in range(-8, 9))
    assert d13 == pytest.approx(direct, abs=1e-9)
    lipschitz = 2 * math.pi * 0.0344 * sum(2.0 ** -abs(k) for k in range(-8, 9))
    assert d13 < lipschitz < 0.66

    ordered = sorted(events, key=lambda e: -e.distance)
    _, defects = omega_limit_witness(p, m, phi, ordered, 8)
    assert all(b <= 1.1 * a for a, b in zip(defects, defects[1:]))


def test_omega_witness_rejects_empty():
    with pytest.raises(ValueError):
        omega_limit_witness(TorusPoint(0, 0), MapSpec.standard(1), SamplingFunction(), [], 3)
