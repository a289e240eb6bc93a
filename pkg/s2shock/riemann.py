"""
s2shock: riemann.py

Physical and Riemann variables, the symmetric-hyperbolic transport matrices
in shock-adapted coordinates, their diagonalization, the forcing vectors,
the vorticity identity and the 2D modulation evaluators.

Only formulas live here: nothing is evolved in two dimensions.

License: MIT
"""

import math

import numpy as np

from .data_models import BetaConstants, PhysVars, RiemannVars, SystemMatrices
from .exceptions import InvalidAdiabaticIndexError, SingularMatrixError

__all__ = ['betas', 'to_riemann', 'to_phys', 'b_matrix', 'b_matrix_inverse', 'db_dlambda', 'assemble_matrices',
           'forcing_p', 'forcing_p_metric_form', 'forcing_r_expanded', 'forcing_r_vector', 'vorticity',
           'transport_2d', 'origin_transport_from_hessian', 'rotation_constraints_2d']

_K1 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
_K2 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])


def betas(gamma):
    """
    Constants of the rescaled Euler system for the adiabatic index gamma.

    Parameters
    ----------
    gamma : float
        adiabatic index, must exceed 1

    Returns
    -------
    :class:`~s2shock.BetaConstants`
        alpha = (gamma - 1) / 2, beta1 = 1 / (1 + alpha), beta2 = (1 - alpha) / (1 + alpha),
        beta3 = alpha / (1 + alpha)
    """
    numeric = isinstance(gamma, (int, float, np.integer, np.floating)) and not isinstance(gamma, bool)
    if not (numeric and math.isfinite(gamma) and gamma > 1.0):
        raise InvalidAdiabaticIndexError(details='gamma={!r}'.format(gamma))
    alpha = 0.5 * (gamma - 1.0)
    return BetaConstants(alpha, 1.0 / (1.0 + alpha), (1.0 - alpha) / (1.0 + alpha), alpha / (1.0 + alpha))


def to_riemann(P, lam):
    """w, z = <lambda>^-1 (V1 - lambda V2) +- S and a = <lambda>^-1 (lambda V1 + V2)."""
    c = 1.0 / math.sqrt(1.0 + lam ** 2)
    normal = c * (P.V1 - lam * P.V2)
    return RiemannVars(normal + P.S, normal - P.S, c * (lam * P.V1 + P.V2))


def to_phys(R, lam):
    """Inverse of :func:`to_riemann`."""
    c = 1.0 / math.sqrt(1.0 + lam ** 2)
    half = 0.5 * (R.w + R.z)
    return PhysVars(c * half + lam * c * R.a, -lam * c * half + c * R.a, 0.5 * (R.w - R.z))


def b_matrix(lam):
    """The change of variables R = B P."""
    c = 1.0 / math.sqrt(1.0 + lam ** 2)
    return np.array([[c, -lam * c, 1.0],
                     [c, -lam * c, -1.0],
                     [lam * c, c, 0.0]])


def b_matrix_inverse(lam):
    """Closed-form inverse of :func:`b_matrix`."""
    c = 1.0 / math.sqrt(1.0 + lam ** 2)
    if not math.isfinite(c) or c == 0.0:
        raise SingularMatrixError(details='lambda={!r}'.format(lam))
    return np.array([[0.5 * c, 0.5 * c, lam * c],
                     [-0.5 * lam * c, -0.5 * lam * c, c],
                     [0.5, -0.5, 0.0]])


def db_dlambda(lam):
    c = 1.0 / math.sqrt(1.0 + lam ** 2)
    return c ** 3 * np.array([[-lam, -1.0, 0.0],
                              [-lam, -1.0, 0.0],
                              [1.0, -lam, 0.0]])


def _state(P):
    V = np.array([P.V1, P.V2], dtype=float)
    return V, float(P.S)


def forcing_p(P, frame, betas):
    """
    Expanded forcing F_P in terms of the untilded chart point.

    Parameters
    ----------
    P : :class:`~s2shock.PhysVars`

    frame : :class:`~s2shock.GeometryFrame`

    betas : :class:`~s2shock.BetaConstants`

    Returns
    -------
    numpy.ndarray
    """
    V, S = _state(P)
    u, g, phi, r2 = frame.u, frame.g, frame.phi, frame.r0 ** 2
    v2 = V @ V
    X = u @ (g - 2.0 * betas.beta1 * V / phi)
    return np.array([-betas.beta1 / r2 * u[0] * v2 - phi / (2.0 * r2) * V[0] * X,
                     -betas.beta1 / r2 * u[1] * v2 - phi / (2.0 * r2) * V[1] * X,
                     betas.beta3 / r2 * (u @ V) * S])


def forcing_p_metric_form(P, frame, betas):
    """F_P written through the metric gradient d phi / d u_j = -phi^2 u_j / (2 r0^2)."""
    V, S = _state(P)
    u, g, phi = frame.u, frame.g, frame.phi
    dphi = -phi ** 2 * u / (2.0 * frame.r0 ** 2)
    b1 = betas.beta1
    coupling = (g - 2.0 * b1 * V / phi) @ dphi
    v2 = V @ V
    return np.array([V[0] / phi * coupling + 2.0 * b1 * v2 / phi ** 2 * dphi[0],
                     V[1] / phi * coupling + 2.0 * b1 * v2 / phi ** 2 * dphi[1],
                     -2.0 * betas.beta3 / phi ** 2 * S * (V @ dphi)])


def _a_r_u2(V2, S, frame, betas):
    c = 1.0 / frame.lambda_bracket
    lam = frame.lam
    coupling = np.array([[-lam, 0.0, 1.0], [0.0, lam, -1.0], [0.5, -0.5, 0.0]])
    return ((2.0 * betas.beta1 * V2 / frame.phi + frame.g[1]) * np.eye(3)
            + 2.0 * betas.beta3 * c * S / frame.phi * coupling)


def _u2_tilde(frame, u):
    return frame.u[1] if u is None else float(np.asarray(u, dtype=float)[1])


def forcing_r_vector(P, frame, betas, psi_dot=0.0, u=None):
    """F_R = B F_P + (d_t B + A_R,u2 d_u2 B) P with dB/dt = psi_dot u2 dB/dlambda and dB/du2 = psi dB/dlambda."""
    V, S = _state(P)
    lam = frame.lam
    B = b_matrix(lam)
    dBP = db_dlambda(lam) @ np.array([V[0], V[1], S])
    A_R_u2 = _a_r_u2(V[1], S, frame, betas)
    return B @ forcing_p(P, frame, betas) + dBP * _u2_tilde(frame, u) * psi_dot + frame.psi * A_R_u2 @ dBP


def forcing_r_expanded(P, frame, betas, psi_dot=0.0, u=None):
    """
    F_R written out componentwise in the Riemann variables.

    The second-row coefficient of a carries +g2, as B A_P,u2 B^-1 requires.
    """
    V, S = _state(P)
    R = to_riemann(P, frame.lam)
    w, z, a = R.w, R.z, R.a
    u_pt, g, phi, r2 = frame.u, frame.g, frame.phi, frame.r0 ** 2
    lam, c = frame.lam, 1.0 / frame.lambda_bracket
    b1, b3, alpha = betas.beta1, betas.beta3, betas.alpha
    v2 = V @ V
    X = u_pt @ (g - 2.0 * b1 * V / phi)
    uV = u_pt @ V

    normal = (-b1 * c / r2 * v2 * (u_pt[0] - lam * u_pt[1])
              - phi * (V[0] - lam * V[1]) * c / (2.0 * r2) * X)
    base = np.array([normal + b3 / r2 * uV * S,
                     normal - b3 / r2 * uV * S,
                     -b1 * c / r2 * v2 * (lam * u_pt[0] + u_pt[1])
                     - phi * (lam * V[0] + V[1]) * c / (2.0 * r2) * X])
    curvature = np.array([
        -(2.0 * b1 / phi * (V[1] - alpha * lam * c * S) + g[1]) * a + b3 / phi * c * S * (w + z),
        -(2.0 * b1 / phi * (V[1] + alpha * lam * c * S) + g[1]) * a - b3 / phi * c * S * (w + z),
        (2.0 * b1 / phi * V[1] + g[1]) * 0.5 * (w + z),
    ])
    motion = np.array([-a, -a, 0.5 * (w + z)])
    return base + c ** 2 * frame.psi * curvature + c ** 2 * _u2_tilde(frame, u) * psi_dot * motion


def assemble_matrices(P, frame, betas, psi_dot=0.0, u=None):
    """
    Transport, damping and forcing of the symmetric-hyperbolic system and its Riemann form.

    Parameters
    ----------
    P : :class:`~s2shock.PhysVars`
        state (V1, V2, S) in the orthonormal frame

    frame : :class:`~s2shock.GeometryFrame`
        geometry at the point, built by :func:`~s2shock.geometry.frame_at`

    betas : :class:`~s2shock.BetaConstants`

    psi_dot : float
        time derivative of the curvature modulation

    u : array_like
        shock-adapted point, defaults to the one the frame was built at

    Returns
    -------
    :class:`~s2shock.SystemMatrices`
    """
    V, S = _state(P)
    phi, g, lam = frame.phi, frame.g, frame.lam
    b1, b2, b3 = betas.beta1, betas.beta2, betas.beta3
    u2t = _u2_tilde(frame, u)

    A_P_u1 = (2.0 * b1 * V[0] / phi + g[0]) * np.eye(3) + 2.0 * b3 * S / phi * _K1
    A_P_u2 = (2.0 * b1 * V[1] / phi + g[1]) * np.eye(3) + 2.0 * b3 * S / phi * _K2
    A_P_u1t = A_P_u1 - lam * A_P_u2 - 0.5 * psi_dot * u2t ** 2 * np.eye(3)
    A_P_u2t = A_P_u2

    h = frame.h
    D_P = np.zeros((3, 3))
    D_P[:2, :2] = h.T

    R = to_riemann(P, lam)
    G = g[0] - lam * g[1] - 0.5 * psi_dot * u2t ** 2
    speeds = np.array([R.w + b2 * R.z, b2 * R.w + R.z, b1 * (R.w + R.z)])
    A_R_u1t = frame.J * np.diag(speeds) + G * np.eye(3)
    A_R_u2t = _a_r_u2(V[1], S, frame, betas)

    h11, h12 = h[0, 0], h[0, 1]
    D_R = (h11 * np.array([[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 1.0]])
           + h12 * np.array([[0.0, 0.0, -1.0], [0.0, 0.0, -1.0], [0.5, 0.5, 0.0]]))

    return SystemMatrices(D_P=D_P, A_P_u1t=A_P_u1t, A_P_u2t=A_P_u2t, F_P=forcing_p(P, frame, betas),
                          B=b_matrix(lam), A_R_u1t=A_R_u1t, A_R_u2t=A_R_u2t, A_P_u1=A_P_u1, A_P_u2=A_P_u2,
                          D_R=D_R, F_R=forcing_r_expanded(P, frame, betas, psi_dot, u))


def vorticity(dA_du1t, dPhiV1_du2t, frame):
    """omega = phi^-2 [phi <lambda> d_u1 a - d_u2 (phi V1)] from caller-supplied shock-adapted derivatives."""
    phi = frame.phi
    return (phi * frame.lambda_bracket * dA_du1t - dPhiV1_du2t) / phi ** 2


def transport_2d(frame, W, Z, A, betas, modulation, s):
    """
    Transport speeds of the self-similar W, Z, A equations at one point.

    Parameters
    ----------
    frame : :class:`~s2shock.GeometryFrame`

    W, Z, A : float
        self-similar Riemann variables, w = exp(-s/2) W + kappa

    betas : :class:`~s2shock.BetaConstants`

    modulation : :class:`~s2shock.ModulationState`
        supplies kappa and beta_tau

    s : float
        self-similar time

    Returns
    -------
    dict
        g_W, g_Z, g_A, h_W, h_Z, h_A and the cross terms h_WA, h_ZA, h_AW, h_AZ
    """
    kappa, bt = modulation.kappa, modulation.beta_tau
    J, G, phi = frame.J, frame.G, frame.phi
    lam, c = frame.lam, 1.0 / frame.lambda_bracket
    b1, b2, b3, alpha = betas.beta1, betas.beta2, betas.beta3, betas.alpha
    grow, decay = math.exp(0.5 * s), math.exp(-0.5 * s)

    P = to_phys(RiemannVars(decay * W + kappa, Z, A), lam)
    V2, S = P.V2, P.S
    g2 = frame.g[1]

    h_WA = 2.0 * b3 * bt / phi * c * S
    h_AW = 0.5 * math.exp(-s) * h_WA
    return {
        'g_W': bt * J * W + bt * grow * (J * (b2 * Z + kappa) + G),
        'g_Z': b2 * bt * J * W + bt * grow * (J * (Z + b2 * kappa) + G),
        'g_A': b1 * bt * J * W + bt * grow * (b1 * J * (Z + kappa) + G),
        'h_W': bt * decay * (2.0 * b1 / phi * (V2 - alpha / phi * lam * c * S) + g2),
        'h_Z': bt * decay * (2.0 * b1 / phi * (V2 + alpha / phi * lam * c * S) + g2),
        'h_A': bt * decay * (2.0 * b1 / phi * V2 + g2),
        'h_WA': h_WA,
        'h_ZA': -grow * h_WA,
        'h_AW': h_AW,
        'h_AZ': -grow * h_AW,
    }


def origin_transport_from_hessian(hessian_d1W, F20, F11):
    """
    Solve for (G_W^0, h_W^0) from the d1 grad W equation at the origin.

    Parameters
    ----------
    hessian_d1W : numpy.ndarray
        [[d111 W, d112 W], [d112 W, d122 W]] at y = 0

    F20, F11 : float
        the matching forcing derivatives

    Returns
    -------
    (float, float)
    """
    H = np.asarray(hessian_d1W, dtype=float)
    if abs(np.linalg.det(H)) < 1e-14 * max(1.0, np.max(np.abs(H)) ** 2):
        raise SingularMatrixError(details='d1 Hessian of W at the origin is singular')
    G_W, h_W = np.linalg.solve(H, np.array([F20, F11], dtype=float))
    return float(G_W), float(h_W)


def rotation_constraints_2d(origin, betas, modulation, s, psi, r0=1.0):
    """
    Modulation rates and rotation generator fixed by the constraints at the origin.

    Parameters
    ----------
    origin : dict
        values at y = 0: F_W, G_W, h_W, Z, A, dF_W1, dG_W1, dF_W2, dZ2; the optional d22F_W, d22Z,
        d122W and d222W enable the curvature rate

    betas : :class:`~s2shock.BetaConstants`

    modulation : :class:`~s2shock.ModulationState`

    s, psi, r0 : float

    Returns
    -------
    dict
        Q12, Q13, Q23, dkappa, dtau and, when the second-order entries are given, dpsi
    """
    kappa, bt = modulation.kappa, modulation.beta_tau
    b1, b2, b3 = betas.beta1, betas.beta2, betas.beta3
    grow, decay = math.exp(0.5 * s), math.exp(-0.5 * s)

    Q23 = -grow / (bt * r0) * origin['h_W'] + 2.0 * b1 / r0 * origin['A']
    Q13 = 2.0 * b3 * kappa / r0 - decay / (bt * r0) * origin['G_W'] + b2 / r0 * (origin['Z'] + kappa)
    Q12 = -origin['dF_W2'] / bt - b2 * grow * origin['dZ2'] - psi * r0 * Q23
    out = {
        'Q12': Q12, 'Q13': Q13, 'Q23': Q23,
        'dkappa': grow / bt * (origin['G_W'] + origin['F_W']),
        'dtau': (origin['dF_W1'] + origin['dG_W1']) / bt,
    }

    if all(k in origin for k in ('d22F_W', 'd22Z', 'd122W', 'd222W')):
        curvature = psi ** 2 + 0.5 / r0 ** 2
        out['dpsi'] = (2.0 * b3 * kappa * (psi ** 2 + 1.0 / r0 ** 2)
                       + grow / bt * (origin['d22F_W'] - origin['G_W'] * origin['d122W']
                                      - origin['h_W'] * origin['d222W'])
                       + b2 * math.exp(s) * origin['d22Z']
                       + curvature * b2 * (origin['Z'] + kappa)
                       + (Q13 - 2.0 * b3 * kappa / r0) / r0)
    return out
