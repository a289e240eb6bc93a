"""
s2shock: geometry.py

Coordinate machinery on the sphere of radius r0: stereographic chart from
the north pole, the rotating frame, shock-adapted coordinates and the
auxiliary quantities entering the transport matrices.

License: MIT
"""

import numpy as np

from .data_models import GeometryFrame, RotationState, SpherePoint, StereoCoords
from .exceptions import ContractViolation, DerivationMismatchError, ProjectionSingularError
from .result_models import OriginTable

__all__ = ['stereo_project', 'stereo_unproject', 'metric_factor', 'shock_coords', 'shock_coords_inverse',
           'frame_at', 'origin_derivative_table', 'origin_values', 'rotation_step', 'rotation_from_generator',
           'is_skew', 'skew_from_components']

POLE_TOLERANCE = 1e-10
ORIGIN_TABLE_TOLERANCE = 1e-6


def is_skew(Q):
    Q = np.asarray(Q, dtype=float)
    return Q.shape == (3, 3) and np.array_equal(Q, -Q.T)


def skew_from_components(q12=0.0, q13=0.0, q23=0.0):
    """The skew matrix with upper entries Q12, Q13, Q23."""
    return np.array([[0.0, q12, q13],
                     [-q12, 0.0, q23],
                     [-q13, -q23, 0.0]])


def _require_skew(Q):
    if not is_skew(Q):
        raise ContractViolation('Q must be skew-symmetric', details='Q={!r}'.format(np.asarray(Q).tolist()))
    return np.asarray(Q, dtype=float)


def stereo_project(p):
    """
    Project a sphere point to the chart plane through the south pole.

    Parameters
    ----------
    p : :class:`~s2shock.SpherePoint`

    Returns
    -------
    :class:`~s2shock.StereoCoords`
        u_i = 2 r0 x_i / (r0 - x3)
    """
    r0 = p.r0
    denom = r0 - p.x[2]
    if denom <= POLE_TOLERANCE * r0:
        raise ProjectionSingularError(details='x3={} within {} of the north pole'.format(p.x[2], POLE_TOLERANCE))
    return StereoCoords(2.0 * r0 * p.x[:2] / denom, r0)


def metric_factor(u, r0=None):
    """phi(u) = 4 r0^2 / (|u|^2 + 4 r0^2); accepts StereoCoords or a raw vector with r0."""
    if isinstance(u, StereoCoords):
        vec, r0 = u.u, u.r0
    else:
        vec, r0 = np.asarray(u, dtype=float), 1.0 if r0 is None else r0
    four_r2 = 4.0 * r0 ** 2
    return four_r2 / (np.sum(np.square(vec), axis=0) + four_r2)


def stereo_unproject(u):
    """Inverse of :func:`stereo_project`."""
    phi = metric_factor(u)
    x = np.array([phi * u.u[0], phi * u.u[1], u.r0 * (1.0 - 2.0 * phi)])
    # renormalize away the last-ulp radius error
    x *= u.r0 / np.linalg.norm(x)
    return SpherePoint(x, u.r0)


def shock_coords(u, psi):
    """(u1 - psi u2^2 / 2, u2)."""
    u = u.u if isinstance(u, StereoCoords) else np.asarray(u, dtype=float)
    return np.array([u[0] - 0.5 * psi * u[1] ** 2, u[1]])


def shock_coords_inverse(u_tilde, psi):
    """(u~1 + psi u~2^2 / 2, u~2)."""
    ut = np.asarray(u_tilde, dtype=float)
    return np.array([ut[0] + 0.5 * psi * ut[1] ** 2, ut[1]])


def frame_at(u_tilde, psi, Q, psi_dot=0.0, r0=1.0):
    """
    Every auxiliary geometric quantity at a point of the shock-adapted chart.

    Parameters
    ----------
    u_tilde : array_like
        shock-adapted coordinates

    psi : float
        curvature modulation

    Q : numpy.ndarray
        skew-symmetric rotation generator

    psi_dot : float
        time derivative of psi, enters the scalar transport coefficient G

    r0 : float
        sphere radius

    Returns
    -------
    :class:`~s2shock.GeometryFrame`
    """
    Q = _require_skew(Q)
    ut = np.asarray(u_tilde, dtype=float)
    u1, u2 = shock_coords_inverse(ut, psi)
    phi = metric_factor(np.array([u1, u2]), r0)
    lam = psi * ut[1]
    bracket = np.sqrt(1.0 + lam ** 2)
    J = bracket / phi

    N = np.array([1.0, -lam]) / bracket
    T = np.array([lam, 1.0]) / bracket
    thetaN = -(u2 + lam * u1) / (2.0 * r0 ** 2 * bracket) + lam * psi / (phi * bracket ** 3)
    thetaT = (u1 - lam * u2) / (2.0 * r0 ** 2 * bracket) + psi / (phi * bracket ** 3)

    tilt = Q[0, 2] * u1 + Q[1, 2] * u2
    g1 = -tilt * u1 / (2.0 * r0) + Q[0, 1] * u2 + Q[0, 2] * r0 * (1.0 / phi - 2.0)
    g2 = -tilt * u2 / (2.0 * r0) + Q[1, 0] * u1 + Q[1, 2] * r0 * (1.0 / phi - 2.0)
    h11 = tilt / (2.0 * r0)
    h12 = Q[0, 1] + (Q[0, 2] * u2 - Q[1, 2] * u1) / (2.0 * r0)
    G = g1 - lam * g2 - 0.5 * psi_dot * ut[1] ** 2

    return GeometryFrame(phi=phi, lam=lam, lambda_bracket=bracket, J=J, N=N, T=T, thetaN=thetaN, thetaT=thetaT,
                         g=[g1, g2], h=[[h11, h12], [-h12, h11]], u=[u1, u2], G=G, psi=psi, r0=r0)


_QUANTITIES = {
    'u1': lambda f: f.u[0],
    'u2': lambda f: f.u[1],
    'lambda': lambda f: f.lam,
    'u1^2': lambda f: f.u[0] ** 2,
    '|u|^2': lambda f: f.u[0] ** 2 + f.u[1] ** 2,
    'phi^-1': lambda f: 1.0 / f.phi,
    '<lambda>': lambda f: f.lambda_bracket,
    'J': lambda f: f.J,
    'g1': lambda f: f.g[0],
    'g2': lambda f: f.g[1],
    'g1-lambda*g2': lambda f: f.g[0] - f.lam * f.g[1],
    'h11': lambda f: f.h[0, 0],
    'h12': lambda f: f.h[0, 1],
}


def origin_values(psi, Q, r0=1.0):
    """
    Closed-form shock-adapted derivatives at the origin.

    Returns
    -------
    list
        (quantity, multi-index, value) triples
    """
    Q = _require_skew(Q)
    q12, q13, q23 = Q[0, 1], Q[0, 2], Q[1, 2]
    inv2r2 = 1.0 / (2.0 * r0 ** 2)
    c = 1.0 / (2.0 * r0)
    return [
        ('u1', (1, 0), 1.0), ('u1', (0, 1), 0.0), ('u1', (0, 2), psi),
        ('u2', (0, 1), 1.0),
        ('lambda', (0, 1), psi),
        ('u1^2', (1, 0), 0.0), ('u1^2', (2, 0), 2.0), ('u1^2', (0, 1), 0.0), ('u1^2', (1, 1), 0.0),
        ('u1^2', (0, 2), 0.0),
        ('|u|^2', (1, 0), 0.0), ('|u|^2', (0, 1), 0.0), ('|u|^2', (2, 0), 2.0), ('|u|^2', (1, 1), 0.0),
        ('|u|^2', (0, 2), 2.0),
        ('phi^-1', (0, 0), 1.0), ('phi^-1', (1, 0), 0.0), ('phi^-1', (0, 1), 0.0), ('phi^-1', (2, 0), inv2r2),
        ('phi^-1', (1, 1), 0.0), ('phi^-1', (0, 2), inv2r2),
        ('<lambda>', (0, 0), 1.0), ('<lambda>', (0, 1), 0.0), ('<lambda>', (0, 2), psi ** 2),
        ('J', (0, 0), 1.0), ('J', (1, 0), 0.0), ('J', (0, 1), 0.0), ('J', (2, 0), inv2r2), ('J', (1, 1), 0.0),
        ('J', (0, 2), inv2r2 + psi ** 2),
        ('g1', (0, 0), -r0 * q13), ('g1', (1, 0), 0.0), ('g1', (0, 1), q12), ('g1', (2, 0), -q13 * c),
        ('g1', (1, 1), -q23 * c), ('g1', (0, 2), q13 * c),
        ('g2', (0, 0), -r0 * q23), ('g2', (1, 0), -q12), ('g2', (0, 1), 0.0), ('g2', (2, 0), q23 * c),
        ('g2', (1, 1), -q13 * c), ('g2', (0, 2), -q23 * c - psi * q12),
        ('g1-lambda*g2', (0, 0), -r0 * q13), ('g1-lambda*g2', (1, 0), 0.0),
        ('g1-lambda*g2', (0, 1), q12 + psi * r0 * q23), ('g1-lambda*g2', (2, 0), -q13 * c),
        ('g1-lambda*g2', (1, 1), psi * q12 - q23 * c), ('g1-lambda*g2', (0, 2), q13 * c),
        ('h11', (0, 0), 0.0),
        ('h12', (0, 0), q12),
    ]


_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFFSETS = np.arange(-2, 3)


def _numeric_derivative(func, order, h):
    a, b = order
    if (a, b) == (0, 0):
        return func(0.0, 0.0)
    if a + b == 1:
        axis = np.array([a, b], dtype=float)
        return sum(w * func(*(k * h * axis)) for w, k in zip(_D1, _OFFSETS)) / h
    if a == 2 or b == 2:
        axis = np.array([a, b], dtype=float) / 2.0
        return sum(w * func(*(k * h * axis)) for w, k in zip(_D2, _OFFSETS)) / h ** 2
    return sum(wi * wj * func(ki * h, kj * h)
               for wi, ki in zip(_D1, _OFFSETS) for wj, kj in zip(_D1, _OFFSETS)) / h ** 2


def origin_derivative_table(psi, Q, r0=1.0, raise_on_mismatch=True):
    """
    Shock-adapted derivatives at the origin computed in closed form and by finite differences of frame_at.

    Parameters
    ----------
    psi : float

    Q : numpy.ndarray
        skew-symmetric generator

    r0 : float

    raise_on_mismatch : bool
        raise DerivationMismatchError when any entry disagrees beyond 1e-6 relative

    Returns
    -------
    :class:`~s2shock.result_models.OriginTable`
    """
    Q = _require_skew(Q)
    table = OriginTable(psi, Q, r0)
    # five-point stencils are exact on the polynomial entries for any h
    h = 1e-2 / (1.0 + abs(psi))

    for name, order, analytic in origin_values(psi, Q, r0):
        extract = _QUANTITIES[name]

        def func(d1, d2, extract=extract):
            return extract(frame_at([d1, d2], psi, Q, 0.0, r0))

        numeric = _numeric_derivative(func, order, h)
        table.add_entry(name, order, analytic, numeric, ORIGIN_TABLE_TOLERANCE * max(1.0, abs(analytic)))

    if raise_on_mismatch and not table.passed:
        raise DerivationMismatchError(details=', '.join(table.failed_checks))
    return table


def rotation_from_generator(K):
    """Rodrigues form of exp(K) for a skew 3x3 matrix K."""
    omega = np.array([K[2, 1], K[0, 2], K[1, 0]])
    angle = np.linalg.norm(omega)
    if angle < 1e-12:
        return np.eye(3) + K + 0.5 * K @ K
    return np.eye(3) + np.sin(angle) / angle * K + (1.0 - np.cos(angle)) / angle ** 2 * K @ K


def rotation_step(state, dt):
    """
    Advance O over dt with Q frozen, O(t + dt) = O(t) exp(Q dt)^T.

    Parameters
    ----------
    state : :class:`~s2shock.RotationState`

    dt : float
        positive step

    Returns
    -------
    :class:`~s2shock.RotationState`
        re-orthonormalized by the polar factor
    """
    if not dt > 0:
        raise ContractViolation('dt must be positive', details='dt={}'.format(dt))
    Q = _require_skew(state.Q)
    O = state.O @ rotation_from_generator(Q * dt).T
    U, _, Vt = np.linalg.svd(O)
    return RotationState(U @ Vt, Q)
