"""Independent reference computations used by the tests."""

import math

import numpy as np
from scipy.integrate import quad


def ou_second_moment(t, a=-1.0, sigma2=2.0, r0=1.0):
    """E[x^2](t) of dx = a x dt + sigma dW with E x(0) = 0, Var x(0) = r0."""
    r_inf = sigma2 / (2.0 * abs(a))
    return r_inf + (r0 - r_inf) * math.exp(2.0 * a * t)


def ou_entropy_functional(T, a=-1.0, sigma2=2.0, r0=1.0):
    """1/2 int_0^T E[(a x)^2] / sigma^2 dt by adaptive quadrature."""
    val, _ = quad(lambda t: a * a * ou_second_moment(t, a, sigma2, r0) / (2.0 * sigma2), 0.0, T,
                  epsabs=1e-13, epsrel=1e-12)
    return val


def log_det(r):
    """1/2 ln det r from the determinant itself (no eigen-decomposition)."""
    sign, logdet = np.linalg.slogdet(r)
    assert sign > 0
    return 0.5 * logdet


def trapezoid_sum(f, lo, hi, k):
    """Composite trapezoid of a callable on k equal panels, written out by hand."""
    h = (hi - lo) / k
    total = 0.5 * (f(lo) + f(hi))
    for j in range(1, k):
        total += f(lo + j * h)
    return total * h


def theta_bisect(lo=1e-6, hi=math.pi / 3, iters=200):
    """Root of 2 cos(t) - 1 - 2 sin(t) by plain bisection."""
    f = lambda t: 2.0 * math.cos(t) - 1.0 - 2.0 * math.sin(t)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (f(lo) > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dense_roots(f, lo, hi, n=200001):
    """Roots by sign changes on a dense grid refined with numpy bisection."""
    x = np.linspace(lo, hi, n)
    y = f(x)
    out = []
    for i in np.nonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)[0]:
        a, b = x[i], x[i + 1]
        for _ in range(80):
            m = 0.5 * (a + b)
            if np.sign(f(m)) == np.sign(f(a)):
                a = m
            else:
                b = m
        out.append(0.5 * (a + b))
    out += list(x[y == 0])
    return sorted(out)
