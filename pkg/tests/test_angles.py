import numpy as np
import pytest

from maqaoa import (
    BETA_PERIOD,
    GAMMA_PERIOD,
    AngleAssignment,
    assignment_from_vector,
    count_zero_angles,
    make_graph,
    random_assignment,
    shared_assignment,
    star_graph,
    zero_assignment,
)

P3 = make_graph(3, [(0, 1), (1, 2)])


def test_assignment_shapes_and_properties():
    a = AngleAssignment(gamma=[[0.1, 0.2]], beta=[[0.3, 0.4, 0.5]])
    assert a.p == 1 and a.n == 3 and a.m == 2
    assert a.gamma.shape == (1, 2) and a.beta.shape == (1, 3)
    with pytest.raises(ValueError):
        AngleAssignment(gamma=[[0.1]], beta=[[0.2], [0.3]])  # layer mismatch


def test_vector_roundtrip():
    rng = np.random.default_rng(0)
    a = random_assignment(P3, p=2, rng=rng)
    vec = a.to_vector()
    assert vec.shape == (2 * (3 + 2),)
    b = assignment_from_vector(P3, 2, vec)
    assert np.array_equal(a.gamma, b.gamma)
    assert np.array_equal(a.beta, b.beta)
    with pytest.raises(ValueError):
        assignment_from_vector(P3, 2, vec[:-1])


def test_shared_assignment_broadcast():
    a = shared_assignment(P3, gammas=[0.7, 0.2], betas=[0.1, 0.4])
    assert a.p == 2
    assert np.all(a.gamma[0] == 0.7) and np.all(a.gamma[1] == 0.2)
    assert np.all(a.beta[0] == 0.1) and np.all(a.beta[1] == 0.4)
    assert a.is_shared()
    with pytest.raises(ValueError):
        shared_assignment(P3, gammas=[0.7], betas=[0.1, 0.4])


def test_is_shared_detects_percomponent_angles():
    a = AngleAssignment(gamma=[[0.5, 0.5]], beta=[[0.1, 0.1, 0.2]])
    assert not a.is_shared()
    assert a.is_shared(tol=0.2)


def test_zero_assignment_counts():
    g = star_graph(4)
    a = zero_assignment(g, p=2)
    assert count_zero_angles(a) == (2 * g.n, 2 * g.m)


def test_random_assignment_ranges():
    rng = np.random.default_rng(1)
    a = random_assignment(P3, p=3, rng=rng)
    assert np.all(a.gamma >= -np.pi) and np.all(a.gamma < np.pi)
    assert np.all(a.beta >= -np.pi / 2) and np.all(a.beta < np.pi / 2)


def test_zero_counting_is_periodic():
    # gamma is zero modulo 2*pi (integer cost spectrum), beta modulo pi
    assert np.isclose(GAMMA_PERIOD, 2 * np.pi)
    assert np.isclose(BETA_PERIOD, np.pi)
    a = AngleAssignment(gamma=[[2 * np.pi, np.pi, -4 * np.pi]],
                        beta=[[np.pi, np.pi / 2, -2 * np.pi]])
    zb, zg = count_zero_angles(a)
    assert zg == 2   # 2*pi and -4*pi count, pi does not
    assert zb == 2   # pi and -2*pi count, pi/2 does not


def test_zero_counting_threshold():
    a = AngleAssignment(gamma=[[5e-4, 5e-3]], beta=[[0.0, 0.3, 0.3]])
    assert count_zero_angles(a, threshold=1e-3) == (1, 1)
    assert count_zero_angles(a, threshold=1e-2) == (1, 2)
