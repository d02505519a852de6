"""Special functions and Gauss-Chebyshev quadrature shared by the analytic evaluators.

Everything here is pure and accepts scalars or numpy arrays elementwise.
"""

import math

import numpy as np
from dataclasses import dataclass

EULER_GAMMA = 0.5772156649015328606

_MAX_ITER = 300
_EPS = 1e-15  # series termination
_CF_EPS = 4.5e-16  # continued fractions stall at the roundoff floor below ~2 ulp

# series/continued-fraction crossover for E1; chosen so both branches
# converge in ~30 terms (the fraction is slow near 1, the series loses
# log10(e^z) ~ 1.7 digits of cancellation at 4, still well inside target)
_E1_SERIES_MAX = 4.0


@dataclass(frozen=True)
class QuadratureRule:
    """First-kind Gauss-Chebyshev rule mapped to [0, upper_limit].

    Weights absorb the substitution Jacobian, so
    ``sum(weights * f(nodes))`` approximates ``integral_0^U f(x) dx``
    directly.
    """
    order: int
    upper_limit: float
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


def chebyshev_rule(order: int, upper_limit: float) -> QuadratureRule:
    """Build the Chebyshev rule of a given order on [0, upper_limit].

    Nodes are x_i = (U/2)(1 + cos((2i-1)pi/(2N))) and the weight of node i
    is (pi*U)/(2N) * |sin((2i-1)pi/(2N))|.
    """
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise ValueError("quadrature order must be a positive integer")
    if not upper_limit > 0:
        raise ValueError("quadrature upper_limit must be positive")
    i = np.arange(1, order + 1)
    ang = (2 * i - 1) * np.pi / (2 * order)
    nodes = (upper_limit / 2.0) * (1.0 + np.cos(ang))
    weights = (np.pi * upper_limit / (2 * order)) * np.abs(np.sin(ang))
    return QuadratureRule(int(order), float(upper_limit), nodes, weights)


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _gamma_series(a, b):
    # regularized P(a,b) by power series, for b < a+1
    total = np.full_like(b, 1.0 / a)
    term = np.full_like(b, 1.0 / a)
    denom = np.full_like(b, a)
    for _ in range(_MAX_ITER):
        denom += 1.0
        term = term * b / denom
        total += term
        if np.all(np.abs(term) < np.abs(total) * _EPS):
            break
    return total * np.exp(-b + a * np.log(np.where(b > 0, b, 1.0)) - math.lgamma(a))


def _gamma_cf(a, b):
    # regularized complement Q(a,b) by continued fraction, for b >= a+1
    tiny = 1e-300
    f = b + 1.0 - a
    c = np.full_like(b, 1e300)
    d = 1.0 / f
    h = d.copy()
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        f = f + 2.0
        d = an * d + f
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = f + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = d * c
        h *= delta
        if np.all(np.abs(delta - 1.0) < _CF_EPS):
            break
    return h * np.exp(-b + a * np.log(b) - math.lgamma(a))


def lower_incomplete_gamma(a: float, b):
    """gamma(a, b) = integral_0^b t^(a-1) e^(-t) dt, for a > 0 and b >= 0.

    Series expansion below b = a+1, continued fraction on the complement
    above it. Accuracy is near machine precision in the relative sense.
    """
    if not a > 0:
        raise ValueError("lower_incomplete_gamma requires a > 0")
    b_arr, scalar = _as_array(b)
    if np.any(b_arr < 0):
        raise ValueError("lower_incomplete_gamma requires b >= 0")
    p = np.empty_like(b_arr)
    lo = b_arr < a + 1.0
    if np.any(lo):
        p[lo] = _gamma_series(a, b_arr[lo])
    if np.any(~lo):
        p[~lo] = 1.0 - _gamma_cf(a, b_arr[~lo])
    out = p * math.gamma(a)
    out = np.where(b_arr == 0.0, 0.0, out)
    return float(out) if scalar else out


def _e1_series(z):
    # E1(z) = -gamma - ln z + sum_{k>=1} (-1)^(k+1) z^k / (k k!)
    total = np.zeros_like(z)
    term = np.ones_like(z)
    for k in range(1, 80):
        term = term * (-z) / k
        total -= term / k
        if np.all(np.abs(term) < 1e-18):
            break
    return -EULER_GAMMA - np.log(z) + total


def _e1_cf_scaled(z):
    # e^z E1(z) by modified Lentz continued fraction, for z > 1
    tiny = 1e-300
    f = z + 1.0
    c = np.full_like(z, 1e300)
    d = 1.0 / f
    h = d.copy()
    for i in range(1, _MAX_ITER + 1):
        an = -float(i * i)
        f = f + 2.0
        d = an * d + f
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = f + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = d * c
        h *= delta
        if np.all(np.abs(delta - 1.0) < _CF_EPS):
            break
    return h


def expint_e1_scaled(z):
    """exp(z) * E1(z) for z > 0, safe for very large z.

    Needed wherever a closed form pairs exp(z) with Ei(-z): the product is
    well scaled even when exp(z) alone overflows.
    """
    z_arr, scalar = _as_array(z)
    if np.any(z_arr <= 0):
        raise ValueError("expint_e1_scaled requires z > 0")
    out = np.empty_like(z_arr)
    lo = z_arr <= _E1_SERIES_MAX
    if np.any(lo):
        out[lo] = np.exp(z_arr[lo]) * _e1_series(z_arr[lo])
    if np.any(~lo):
        out[~lo] = _e1_cf_scaled(z_arr[~lo])
    return float(out) if scalar else out


def expint_ei(x):
    """Exponential integral Ei(x) for x < 0.

    Computed as -E1(-x): convergent series for |x| <= 1, continued
    fraction beyond.
    """
    x_arr, scalar = _as_array(x)
    if np.any(x_arr >= 0):
        raise ValueError("expint_ei is defined here for x < 0 only")
    z = -x_arr
    out = np.empty_like(z)
    lo = z <= _E1_SERIES_MAX
    if np.any(lo):
        out[lo] = -_e1_series(z[lo])
    if np.any(~lo):
        out[~lo] = -np.exp(-z[~lo]) * _e1_cf_scaled(z[~lo])
    return float(out) if scalar else out
