"""
s2shock: profile.py

Closed-form self-similar Burgers profile in one and two dimensions, its
derivatives up to order four, the anisotropic weight eta and the profile
inequalities.

The 1D profile solves -W - W^3 = y. The 2D profile is
W(y1, y2) = <y2> W1d(<y2>^-3 y1), equivalently the root of
W^3 + (1 + y2^2) W + y1 = 0. Its partial derivatives are polynomials in
W, P = -1 / (3W^2 + 1 + y2^2) and y2, generated once at import by
implicit differentiation of that relation.

License: MIT
"""

import itertools
import math

import numpy as np

from .data_models import ProfileEval
from .exceptions import ContractViolation, ProfileDomainError, UnsupportedOrderError

__all__ = ['w1d', 'w1d_deriv', 'w2d', 'w2d_deriv', 'eta', 'selfsimilar_burgers_residual', 'profile_eval',
           'w1d_bound_envelope', 'bound_exponent', 'calibrate_bound_constants', 'profile_table',
           'BOUND_CONSTANTS', 'W1D_ENVELOPE_CONSTANTS', 'MAX_ORDER']

MAX_ORDER = 4

_NEWTON_SEED_RADIUS = 1e-3
_ONE_OVER_SQRT27 = 1.0 / math.sqrt(27.0)

# |d^k W1d| <= C_k <y>^(1/3 - k)
W1D_ENVELOPE_CONSTANTS = (1.0, 1.0, 1.0, 6.0, 35.0)

# |d^gamma W| <= C_gamma eta^(1/6 - gamma1/2 - gamma2/6); calibrate_bound_constants()
# re-estimates them from samples
BOUND_CONSTANTS = {
    (0, 0): 1.0,
    (1, 0): 1.0,
    (0, 1): math.sqrt(3.0) / 3.0,
}
BOUND_CONSTANTS.update({g: 10.0 for g in itertools.product(range(3), repeat=2) if sum(g) == 2})
BOUND_CONSTANTS.update({g: 200.0 for g in itertools.product(range(4), repeat=2) if sum(g) == 3})
BOUND_CONSTANTS.update({g: 2000.0 for g in itertools.product(range(5), repeat=2) if sum(g) == 4})


def _as_finite(y, name='y'):
    arr = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ProfileDomainError(details='{} contains non-finite values'.format(name))
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _newton(W, y, iterations):
    for _ in range(iterations):
        W = W - (W + W ** 3 + y) / (1.0 + 3.0 * W ** 2)
    return W


def _w1d(y):
    # cancellation-free Cardano root, odd extension
    ay = np.abs(y)
    a = 0.5 * ay + np.hypot(_ONE_OVER_SQRT27, 0.5 * ay)
    W = -np.sign(y) * (np.cbrt(a) - np.cbrt(1.0 / (27.0 * a)))
    small = ay < _NEWTON_SEED_RADIUS
    if np.any(small):
        W = np.where(small, _newton(-y, y, 4), W)
    return _newton(W, y, 1)


def w1d(y):
    """
    The 1D self-similar Burgers profile.

    Parameters
    ----------
    y : float or numpy.ndarray
        finite self-similar coordinate

    Returns
    -------
    float or numpy.ndarray
        W with -W - W^3 = y
    """
    arr = _as_finite(y)
    return _out(_w1d(arr), y)


def _w1d_derivs(W, order):
    d1 = -1.0 / (1.0 + 3.0 * W ** 2)
    derivs = [d1]
    if order >= 2:
        derivs.append(6.0 * W * d1 ** 3)
    if order >= 3:
        d2 = derivs[1]
        derivs.append(6.0 * d1 ** 4 + 18.0 * W * d1 ** 2 * d2)
    if order >= 4:
        d2, d3 = derivs[1], derivs[2]
        derivs.append(42.0 * d1 ** 3 * d2 + 36.0 * W * d1 * d2 ** 2 + 18.0 * W * d1 ** 2 * d3)
    return derivs


def w1d_deriv(y, order):
    """
    Derivative of order 1..4 of the 1D profile.

    Parameters
    ----------
    y : float or numpy.ndarray

    order : int
        1 <= order <= 4

    Returns
    -------
    float or numpy.ndarray
    """
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_ORDER:
        raise ContractViolation('order out of range', details='order={!r}'.format(order))
    arr = _as_finite(y)
    return _out(_w1d_derivs(_w1d(arr), order)[order - 1], y)


def w2d(y1, y2):
    """The 2D profile <y2> W1d(<y2>^-3 y1)."""
    a1 = _as_finite(y1, 'y1')
    a2 = _as_finite(y2, 'y2')
    b = np.sqrt(1.0 + a2 ** 2)
    value = b * _w1d(a1 / b ** 3)
    return float(value) if np.ndim(value) == 0 else value


# polynomials in (W, P, y2) stored as {(i, j, k): coefficient}
_D1_RULES = {'W': {(0, 1, 0): 1.0}, 'P': {(1, 3, 0): 6.0}, 'y': {}}
_D2_RULES = {'W': {(1, 1, 1): 2.0}, 'P': {(0, 2, 1): 2.0, (2, 3, 1): 12.0}, 'y': {(0, 0, 0): 1.0}}


def _poly_add(acc, poly, scale, shift):
    for (i, j, k), c in poly.items():
        key = (i + shift[0], j + shift[1], k + shift[2])
        acc[key] = acc.get(key, 0.0) + scale * c


def _differentiate(poly, rules):
    out = {}
    for (i, j, k), c in poly.items():
        if i:
            _poly_add(out, rules['W'], c * i, (i - 1, j, k))
        if j:
            _poly_add(out, rules['P'], c * j, (i, j - 1, k))
        if k:
            _poly_add(out, rules['y'], c * k, (i, j, k - 1))
    return dict((key, c) for key, c in out.items() if c != 0.0)


def _build_derivative_polys():
    polys = {}
    for g1 in range(MAX_ORDER + 1):
        poly = {(1, 0, 0): 1.0}
        for _ in range(g1):
            poly = _differentiate(poly, _D1_RULES)
        for g2 in range(MAX_ORDER + 1 - g1):
            polys[(g1, g2)] = poly
            poly = _differentiate(poly, _D2_RULES)
    return polys


_DERIVATIVE_POLYS = _build_derivative_polys()


def _eval_poly(poly, W, P, y2):
    total = np.zeros(np.broadcast(W, P, y2).shape)
    for (i, j, k), c in poly.items():
        total = total + c * W ** i * P ** j * y2 ** k
    return total


def _check_gamma(gamma):
    try:
        g1, g2 = (int(g) for g in gamma)
    except (TypeError, ValueError):
        raise ContractViolation('multi-index must be a pair of integers', details='gamma={!r}'.format(gamma))
    if g1 < 0 or g2 < 0:
        raise ContractViolation('negative multi-index', details='gamma={!r}'.format(gamma))
    if g1 + g2 > MAX_ORDER:
        raise UnsupportedOrderError(details='|gamma|={} > {}'.format(g1 + g2, MAX_ORDER))
    return g1, g2


def _w2d_with_p(a1, a2):
    b = np.sqrt(1.0 + a2 ** 2)
    W = b * _w1d(a1 / b ** 3)
    P = -1.0 / (3.0 * W ** 2 + 1.0 + a2 ** 2)
    return W, P


def w2d_deriv(y1, y2, gamma):
    """
    Partial derivative d1^gamma1 d2^gamma2 of the 2D profile.

    Parameters
    ----------
    y1, y2 : float or numpy.ndarray

    gamma : (int, int)
        multi-index with |gamma| <= 4

    Returns
    -------
    float or numpy.ndarray
    """
    g1, g2 = _check_gamma(gamma)
    a1 = _as_finite(y1, 'y1')
    a2 = _as_finite(y2, 'y2')
    W, P = _w2d_with_p(a1, a2)
    value = _eval_poly(_DERIVATIVE_POLYS[(g1, g2)], W, P, a2)
    return float(value) if np.ndim(value) == 0 else value


def eta(y1, y2, p=1.0):
    """The anisotropic weight (1 + y1^2 + y2^6)^p."""
    base = 1.0 + np.square(y1) + np.power(y2, 6)
    value = np.power(base, p)
    return float(value) if np.ndim(value) == 0 else value


def selfsimilar_burgers_residual(y1, y2):
    """
    Residual -W/2 + (3/2 y1 + W) d1W + 1/2 y2 d2W of the 2D self-similar Burgers equation.
    """
    a1 = _as_finite(y1, 'y1')
    a2 = _as_finite(y2, 'y2')
    W, P = _w2d_with_p(a1, a2)
    d2W = 2.0 * a2 * W * P
    value = -0.5 * W + (1.5 * a1 + W) * P + 0.5 * a2 * d2W
    return float(value) if np.ndim(value) == 0 else value


def profile_eval(y1, y2):
    """Value, gradient, Hessian and third-order entries at one point."""
    d = dict((g, w2d_deriv(y1, y2, g)) for g in _DERIVATIVE_POLYS if sum(g) <= 3)
    return ProfileEval(
        value=d[(0, 0)],
        grad=[d[(1, 0)], d[(0, 1)]],
        hessian=[[d[(2, 0)], d[(1, 1)]], [d[(1, 1)], d[(0, 2)]]],
        third={'d111': d[(3, 0)], 'd112': d[(2, 1)], 'd122': d[(1, 2)], 'd222': d[(0, 3)]},
    )


def w1d_bound_envelope(y, order=0):
    """The 1D envelope C_k <y>^(1/3 - k) for |d^k W1d|."""
    if not 0 <= order <= MAX_ORDER:
        raise ContractViolation('order out of range', details='order={!r}'.format(order))
    bracket = np.sqrt(1.0 + np.square(y))
    value = W1D_ENVELOPE_CONSTANTS[order] * bracket ** (1.0 / 3.0 - order)
    return float(value) if np.ndim(value) == 0 else value


def bound_exponent(gamma):
    g1, g2 = _check_gamma(gamma)
    return 1.0 / 6.0 - g1 / 2.0 - g2 / 6.0


def calibrate_bound_constants(y1, y2):
    """
    Sampled maxima of |d^gamma W| eta^-(1/6 - gamma1/2 - gamma2/6) for every |gamma| <= 4.

    Parameters
    ----------
    y1, y2 : numpy.ndarray
        sample points

    Returns
    -------
    dict
        gamma -> sampled maximum ratio
    """
    a1 = _as_finite(y1, 'y1')
    a2 = _as_finite(y2, 'y2')
    W, P = _w2d_with_p(a1, a2)
    base = 1.0 + a1 ** 2 + a2 ** 6
    out = {}
    for gamma, poly in sorted(_DERIVATIVE_POLYS.items()):
        ratio = np.abs(_eval_poly(poly, W, P, a2)) * base ** (-bound_exponent(gamma))
        out[gamma] = float(np.max(ratio))
    return out


def profile_table(y1min, y1max, y2min, y2max, n):
    """
    Rows (y1, y2, W, dW1, dW2, residual) over an n x n tensor grid.

    Returns
    -------
    numpy.ndarray
        shape (n*n, 6)
    """
    if n < 1:
        raise ContractViolation('table size must be positive', details='n={}'.format(n))
    g1, g2 = np.meshgrid(np.linspace(y1min, y1max, n), np.linspace(y2min, y2max, n), indexing='ij')
    a1 = g1.ravel()
    a2 = g2.ravel()
    W, P = _w2d_with_p(_as_finite(a1, 'y1'), _as_finite(a2, 'y2'))
    dW2 = 2.0 * a2 * W * P
    residual = -0.5 * W + (1.5 * a1 + W) * P + 0.5 * a2 * dW2
    return np.column_stack([a1, a2, W, P, dW2, residual])
