import numpy as np
import pytest

from qmask.simplex import coefficients, initial_simplex, nelder_mead


def test_coefficients_small_and_large_n():
    assert coefficients(1) == (1.0, 2.0, 0.5, 0.5)
    # at n = 2 the adaptive values reduce to the classic ones
    assert coefficients(2) == pytest.approx((1.0, 2.0, 0.5, 0.5))
    r, chi, g, s = coefficients(16)
    assert chi == pytest.approx(1.125) and g == pytest.approx(0.71875) and s == pytest.approx(0.9375)


def test_initial_simplex_shape():
    sim = initial_simplex(np.zeros(3), 0.5)
    assert sim.shape == (4, 3)
    assert np.array_equal(sim[1:], 0.5 * np.eye(3))


def test_quadratic_minimum():
    c = np.array([1.0, -2.0, 0.5])
    res = nelder_mead(lambda x: float(np.sum((x - c) ** 2)), np.zeros(3), tol=1e-14, max_iters=5000)
    assert res.converged
    assert np.allclose(res.x, c, atol=1e-5)
    assert res.fun <= 1e-10


def test_rosenbrock():
    def rosen(x):
        return float(100 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2)

    res = nelder_mead(rosen, [-1.2, 1.0], tol=1e-14, max_iters=5000)
    assert np.allclose(res.x, [1, 1], atol=1e-4)


def test_max_iters_and_trace():
    res = nelder_mead(lambda x: float(np.sum(x**2)), np.ones(4), max_iters=30, trace_every=10, tol=1e-30)
    assert res.nit == 30 and not res.converged
    assert [i for i, _ in res.trace] == [0, 10, 20, 30]
    values = [v for _, v in res.trace]
    assert values == sorted(values, reverse=True)


def test_target_stops_early():
    res = nelder_mead(lambda x: float(np.sum(x**2)), np.ones(2), target=0.5, tol=1e-30)
    assert res.converged and res.fun <= 0.5


def test_deterministic():
    f = lambda x: float(np.sum(np.sin(3 * x) + x**2))  # noqa: E731
    a = nelder_mead(f, np.arange(5.0), max_iters=400)
    b = nelder_mead(f, np.arange(5.0), max_iters=400)
    assert np.array_equal(a.x, b.x) and a.trace == b.trace and a.nfev == b.nfev
