import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gdei.loss import LinearModel, add_bias, least_squares, mse, mse_gradient, predict


def central_difference(f, theta, h=1e-6):
    grad = np.zeros_like(theta)
    for i in range(theta.size):
        e = np.zeros_like(theta)
        e[i] = h
        grad[i] = (f(theta + e) - f(theta - e)) / (2 * h)
    return grad


def test_add_bias():
    out = add_bias(np.array([[2.0], [5.0]]))
    np.testing.assert_array_equal(out, [[1, 2], [1, 5]])


def test_add_bias_column_sums():
    X = np.array([[1.0, -2.0], [0.5, 3.0], [4.0, 0.25]])
    s1, s2 = X[:, 0].sum(), X[:, 1].sum()
    np.testing.assert_array_equal(add_bias(X).sum(axis=0), [3.0, s1, s2])


def test_add_bias_rejects_empty():
    with pytest.raises(ValueError):
        add_bias(np.empty((3, 0)))
    with pytest.raises(ValueError):
        add_bias(np.array([1.0, 2.0]))


def test_predict_examples():
    assert predict(LinearModel([4.0, 3.0]), np.array([[1.0, 1.0]]))[0] == 7.0
    np.testing.assert_array_equal(predict(np.zeros(3), np.ones((4, 3))), np.zeros(4))
    assert predict(np.array([1.0, 2.0, 3.0]), np.array([[1.0, 0.5, -1.0]]))[0] == -1.0


def test_predict_dimension_mismatch():
    with pytest.raises(ValueError):
        predict(np.zeros(3), np.ones((2, 2)))


def test_linear_model_validation():
    with pytest.raises(ValueError):
        LinearModel([1.0])
    with pytest.raises(ValueError):
        LinearModel([1.0, np.inf])
    m = LinearModel([4.0, 3.0, 0.5])
    assert m.intercept == 4.0
    np.testing.assert_array_equal(m.weights, [3.0, 0.5])


def test_mse_examples():
    assert mse(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0.0
    assert mse(np.zeros(2), np.array([1.0, 3.0])) == 5.0


def test_mse_errors():
    with pytest.raises(ValueError):
        mse(np.zeros(2), np.zeros(3))
    with pytest.raises(ValueError):
        mse(np.zeros(0), np.zeros(0))


# keep residuals out of the subnormal range, where r * r underflows to 0
finite = st.floats(-1e3, 1e3).filter(lambda x: x == 0 or abs(x) > 1e-100)


@settings(max_examples=100, deadline=None)
@given(
    p=arrays(np.float64, 8, elements=finite),
    t=arrays(np.float64, 8, elements=finite),
    c=st.floats(-10, 10),
)
def test_mse_properties(p, t, c):
    val = mse(p, t)
    assert val >= 0
    assert val == mse(t, p)
    assert (val == 0) == np.array_equal(p, t)
    scaled = mse(t + c * (p - t), t)
    assert scaled == pytest.approx(c * c * val, rel=1e-9, abs=1e-9)


def test_gradient_zero_at_perfect_fit():
    Xb = add_bias(np.array([[1.0], [2.0], [3.0]]))
    theta = np.array([4.0, 3.0])
    y = Xb @ theta
    np.testing.assert_array_equal(mse_gradient(theta, Xb, y), [0.0, 0.0])


def test_gradient_vanishes_at_least_squares():
    rng = np.random.default_rng(0)
    Xb = add_bias(rng.uniform(0, 2, (50, 3)))
    y = rng.normal(size=50)
    # oracle: normal equations solved independently of least_squares()
    theta = np.linalg.lstsq(Xb, y, rcond=None)[0]
    assert np.max(np.abs(mse_gradient(theta, Xb, y))) < 1e-9
    np.testing.assert_allclose(least_squares(Xb, y), theta, atol=1e-10)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    for _ in range(20):
        Xb = add_bias(rng.normal(size=(50, 3)))
        y = rng.normal(size=50)
        theta = rng.normal(size=4)
        fd = central_difference(lambda th: mse(Xb @ th, y), theta)
        an = mse_gradient(theta, Xb, y)
        err = np.abs(an - fd) / np.maximum(np.abs(fd), 1e-9)
        # absolute floor: tiny components are compared absolutely
        small = np.abs(fd) < 1e-9
        assert np.all(err[~small] < 1e-6)
        assert np.all(np.abs(an - fd)[small] < 1e-9)


def test_gradient_dimension_mismatch():
    with pytest.raises(ValueError):
        mse_gradient(np.zeros(2), np.ones((3, 2)), np.ones(4))


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(-5, 5),
    b=st.floats(-5, 5),
    seed=st.integers(0, 10_000),
)
def test_predict_linear_in_theta(a, b, seed):
    rng = np.random.default_rng(seed)
    Xb = add_bias(rng.uniform(0, 2, (10, 2)))
    t1, t2 = rng.normal(size=3), rng.normal(size=3)
    lhs = predict(a * t1 + b * t2, Xb)
    rhs = a * predict(t1, Xb) + b * predict(t2, Xb)
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12)
