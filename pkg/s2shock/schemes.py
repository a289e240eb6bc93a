"""
s2shock: schemes.py

Spatial and temporal discretization shared by the solver and the
diagnostics: fifth-order WENO upwind derivatives for transport terms,
fourth-order centered derivatives for diagnostics, local cubic
interpolation and the classical four-stage Runge-Kutta step.

License: MIT
"""

import numpy as np

__all__ = ['OPTIMAL_WEIGHTS', 'WENO_EPSILON', 'weno_derivatives', 'upwind_derivative', 'centered_derivative',
           'centered_derivatives', 'cubic_interpolate', 'rk4_step', 'GHOST_CELLS', 'STENCIL_HALF_WIDTH']

# linear weights giving fifth order on smooth data
OPTIMAL_WEIGHTS = (0.1, 0.6, 0.3)
WENO_EPSILON = 1e-6
GHOST_CELLS = 3

_CENTERED = {
    1: np.array([1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0]),
    2: np.array([-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0]),
    3: np.array([1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0]),
    4: np.array([-1.0 / 6.0, 2.0, -13.0 / 2.0, 28.0 / 3.0, -13.0 / 2.0, 2.0, -1.0 / 6.0]),
}
STENCIL_HALF_WIDTH = 3


def _weno_combine(v1, v2, v3, v4, v5, eps):
    s1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) ** 2 + 0.25 * (v1 - 4.0 * v2 + 3.0 * v3) ** 2
    s2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) ** 2 + 0.25 * (v2 - v4) ** 2
    s3 = 13.0 / 12.0 * (v3 - 2.0 * v4 + v5) ** 2 + 0.25 * (3.0 * v3 - 4.0 * v4 + v5) ** 2

    d0, d1, d2 = OPTIMAL_WEIGHTS
    a1 = d0 / (eps + s1) ** 2
    a2 = d1 / (eps + s2) ** 2
    a3 = d2 / (eps + s3) ** 2
    total = a1 + a2 + a3

    p1 = v1 / 3.0 - 7.0 * v2 / 6.0 + 11.0 * v3 / 6.0
    p2 = -v2 / 6.0 + 5.0 * v3 / 6.0 + v4 / 3.0
    p3 = v3 / 3.0 + 5.0 * v4 / 6.0 - v5 / 6.0
    return (a1 * p1 + a2 * p2 + a3 * p3) / total


def weno_derivatives(u, dx):
    """
    Left- and right-biased fifth-order WENO approximations of du/dx.

    Boundary values are extended by constant ghost cells.

    Parameters
    ----------
    u : numpy.ndarray
        samples on a uniform grid

    dx : float
        grid spacing

    Returns
    -------
    (numpy.ndarray, numpy.ndarray)
        D-minus (for positive transport speed) and D-plus
    """
    n = u.size
    # undivided differences: the indicators and WENO_EPSILON are independent of dx
    d = np.diff(np.pad(u, GHOST_CELLS, mode='edge'))
    minus = _weno_combine(d[0:n], d[1:n + 1], d[2:n + 2], d[3:n + 3], d[4:n + 4], WENO_EPSILON)
    plus = _weno_combine(d[5:n + 5], d[4:n + 4], d[3:n + 3], d[2:n + 2], d[1:n + 1], WENO_EPSILON)
    return minus / dx, plus / dx


def upwind_derivative(u, dx, speed):
    """The WENO derivative biased against the sign of `speed` pointwise."""
    minus, plus = weno_derivatives(u, dx)
    return np.where(speed > 0.0, minus, plus)


def centered_derivative(u, dx, order=1):
    """
    Fourth-order centered derivative of the given order (1 to 4), edge-padded.

    Parameters
    ----------
    u : numpy.ndarray

    dx : float

    order : int

    Returns
    -------
    numpy.ndarray
    """
    weights = _CENTERED[order]
    half = weights.size // 2
    up = np.pad(u, half, mode='edge')
    n = u.size
    out = np.zeros(n)
    for k, c in enumerate(weights):
        if c != 0.0:
            out += c * up[k:k + n]
    return out / dx ** order


def centered_derivatives(u, dx, max_order=4):
    return [centered_derivative(u, dx, k) for k in range(1, max_order + 1)]


def cubic_interpolate(grid, values, x):
    """
    Four-point Lagrange interpolation of gridded values at x.

    Parameters
    ----------
    grid : numpy.ndarray
        uniform grid

    values : numpy.ndarray or list of numpy.ndarray
        one or more arrays sampled on grid

    x : float
        query point inside the grid

    Returns
    -------
    float or list of float
    """
    dx = grid[1] - grid[0]
    j = int(np.clip(np.floor((x - grid[0]) / dx), 1, grid.size - 3))
    nodes = grid[j - 1:j + 3]
    basis = np.ones(4)
    for a in range(4):
        for b in range(4):
            if a != b:
                basis[a] *= (x - nodes[b]) / (nodes[a] - nodes[b])
    if isinstance(values, (list, tuple)):
        return [float(basis @ v[j - 1:j + 3]) for v in values]
    return float(basis @ values[j - 1:j + 3])


def rk4_step(rhs, y, t, dt):
    """Classical four-stage Runge-Kutta step for a tuple of arrays."""
    def axpy(a, k):
        return tuple(yi + a * ki for yi, ki in zip(y, k))

    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, axpy(0.5 * dt, k1))
    k3 = rhs(t + 0.5 * dt, axpy(0.5 * dt, k2))
    k4 = rhs(t + dt, axpy(dt, k3))
    return tuple(yi + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
                 for yi, a, b, c, d in zip(y, k1, k2, k3, k4))
