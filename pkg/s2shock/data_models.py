"""
s2shock: data_models.py

Defines the value types passed between the numerical modules.

License: MIT
"""

import math

import numpy as np

from .exceptions import ContractViolation, PastBlowupError

__all__ = ['DataModel', 'BetaConstants', 'PhysVars', 'RiemannVars', 'SpherePoint', 'StereoCoords',
           'RotationState', 'GeometryFrame', 'ProfileEval', 'SystemMatrices', 'ModulationState',
           'OriginConstraints', 'EquivariantState', 'SelfSimField']


def _to_plain(v):
    if isinstance(v, DataModel):
        return v.to_dict()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_to_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _to_plain(x) for k, x in v.items()}
    return v


def _values_equal(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(_values_equal(x, y) for x, y in zip(a, b))
    return a == b


def _freeze(v):
    if isinstance(v, np.ndarray):
        return v.shape, tuple(v.ravel().tolist())
    if isinstance(v, (list, tuple)):
        return tuple(_freeze(x) for x in v)
    if isinstance(v, dict):
        return tuple(sorted((k, _freeze(x)) for k, x in v.items()))
    return v


def _floats(v):
    return None if v is None else np.asarray(v, dtype=float)


class DataModel(object):
    """
    This is base class for data models.

    It provides following utilities:
      1. class method `from_dict` to construct model from a dict
      2. instance method `to_dict` to transfer model to a dict of plain python values
      3. overrides equality test using __dict__, numpy arrays compared element-wise
    """
    @classmethod
    def from_dict(cls, dct):
        """Create DataModel object from dict."""
        if not dct:
            return None
        return cls(**dct)

    def to_dict(self):
        """Returns a dict representation of DataModel object."""
        return {k: _to_plain(v) for k, v in self.__dict__.items()}

    def __repr__(self):
        cls_name = self.__class__.__name__
        params = ', '.join(['{}={!r}'.format(k, v) for k, v in self.__dict__.items()])
        return '{}({})'.format(cls_name, params)

    def __eq__(self, other):
        if isinstance(other, self.__class__):
            if self is other:
                return True
            if self.__dict__.keys() != other.__dict__.keys():
                return False
            return all(_values_equal(v, other.__dict__[k]) for k, v in self.__dict__.items())
        return NotImplemented

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(tuple(sorted((k, _freeze(v)) for k, v in self.__dict__.items())))


class BetaConstants(DataModel):
    """
    The sound-speed exponent and the three transport constants derived from the adiabatic index.

    Attributes
    ----------
    alpha : float
        alpha = (gamma - 1) / 2

    beta1 : float
        beta1 = 1 / (1 + alpha)

    beta2 : float
        beta2 = (1 - alpha) / (1 + alpha)

    beta3 : float
        beta3 = alpha / (1 + alpha)
    """

    def __init__(self, alpha, beta1, beta2, beta3):
        self.alpha = float(alpha)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.beta3 = float(beta3)


class PhysVars(DataModel):
    """
    Velocity components in the orthonormal E-frame and the rescaled sound speed.

    Attributes
    ----------
    V1, V2 : float
        velocity components

    S : float
        rescaled sound speed, positive in physical states
    """

    def __init__(self, V1, V2, S):
        self.V1 = float(V1)
        self.V2 = float(V2)
        self.S = float(S)

    @property
    def is_vacuum(self):
        return self.S <= 0.0


class RiemannVars(DataModel):
    """
    Riemann variables w = v.N + S, z = v.N - S and the tangential velocity a = v.T.
    """

    def __init__(self, w, z, a=0.0):
        self.w = float(w)
        self.z = float(z)
        self.a = float(a)


class SpherePoint(DataModel):
    """
    A point on the sphere of radius r0 centered at the origin.

    Attributes
    ----------
    x : numpy.ndarray
        cartesian coordinates, |x| = r0 to relative tolerance 1e-12

    r0 : float
        sphere radius
    """

    def __init__(self, x, r0=1.0):
        self.x = np.asarray(x, dtype=float)
        self.r0 = float(r0)
        if self.x.shape != (3,) or abs(np.linalg.norm(self.x) - self.r0) > 1e-12 * self.r0:
            raise ContractViolation('point is not on the sphere', details='x={!r}, r0={}'.format(x, r0))


class StereoCoords(DataModel):
    """Chart coordinates u of the stereographic projection from the north pole."""

    def __init__(self, u, r0=1.0):
        self.u = np.asarray(u, dtype=float)
        self.r0 = float(r0)


class RotationState(DataModel):
    """
    Time-dependent rotation of the sphere.

    Attributes
    ----------
    O : numpy.ndarray
        3x3 orthogonal matrix

    Q : numpy.ndarray
        3x3 skew-symmetric generator with Q = O'^T O
    """

    def __init__(self, O, Q):
        self.O = np.asarray(O, dtype=float)
        self.Q = np.asarray(Q, dtype=float)


class GeometryFrame(DataModel):
    """
    Auxiliary geometric quantities at one point of the shock-adapted chart.

    Attributes
    ----------
    phi : float
        metric factor 4r0^2 / (|u|^2 + 4r0^2)

    lam : float
        lambda = psi * u2

    lambda_bracket : float
        sqrt(1 + lambda^2)

    J : float
        phi^-1 * lambda_bracket

    N, T : numpy.ndarray
        unit normal and tangent in the E-frame

    thetaN, thetaT : float
        the connection 1-form evaluated on N and T

    g : numpy.ndarray
        time derivative of the chart coordinates under the rotation

    h : numpy.ndarray
        2x2 rotation coefficients, h11 = h22 and h12 = -h21

    u : numpy.ndarray
        untilded chart point

    G : float
        scalar transport coefficient g1 - lambda g2 - psi_dot u2^2 / 2

    psi, r0 : float
        curvature modulation and sphere radius the frame was built with
    """

    def __init__(self, phi, lam, lambda_bracket, J, N, T, thetaN, thetaT, g, h, u, G, psi=0.0, r0=1.0):
        self.phi = float(phi)
        self.lam = float(lam)
        self.lambda_bracket = float(lambda_bracket)
        self.J = float(J)
        self.N = np.asarray(N, dtype=float)
        self.T = np.asarray(T, dtype=float)
        self.thetaN = float(thetaN)
        self.thetaT = float(thetaT)
        self.g = np.asarray(g, dtype=float)
        self.h = np.asarray(h, dtype=float)
        self.u = np.asarray(u, dtype=float)
        self.G = float(G)
        self.psi = float(psi)
        self.r0 = float(r0)


class ProfileEval(DataModel):
    """
    Value and derivatives of the 2D profile at one point.

    Attributes
    ----------
    value : float

    grad : numpy.ndarray
        (d1 W, d2 W)

    hessian : numpy.ndarray
        symmetric 2x2

    third : dict
        third-order entries keyed 'd111', 'd112', 'd122', 'd222'
    """

    def __init__(self, value, grad, hessian, third):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hessian = np.asarray(hessian, dtype=float)
        self.third = dict((k, float(v)) for k, v in third.items())


class SystemMatrices(DataModel):
    """
    Matrices and forcing vectors of the symmetric-hyperbolic system and its Riemann diagonalization.

    Attributes
    ----------
    D_P : numpy.ndarray
        damping matrix, third row zero

    A_P_u1t, A_P_u2t : numpy.ndarray
        transport matrices in shock-adapted coordinates

    A_P_u1, A_P_u2 : numpy.ndarray
        symmetric transport matrices before straightening

    F_P : numpy.ndarray
        forcing vector

    B : numpy.ndarray
        change of variables R = B P

    A_R_u1t, A_R_u2t : numpy.ndarray
        transport matrices in Riemann variables, A_R_u1t diagonal

    D_R : numpy.ndarray
        B D_P B^-1

    F_R : numpy.ndarray
        forcing vector in Riemann variables
    """

    def __init__(self, D_P, A_P_u1t, A_P_u2t, F_P, B, A_R_u1t, A_R_u2t, A_P_u1=None, A_P_u2=None,
                 D_R=None, F_R=None):
        self.D_P = _floats(D_P)
        self.A_P_u1t = _floats(A_P_u1t)
        self.A_P_u2t = _floats(A_P_u2t)
        self.F_P = _floats(F_P)
        self.B = _floats(B)
        self.A_R_u1t = _floats(A_R_u1t)
        self.A_R_u2t = _floats(A_R_u2t)
        self.A_P_u1 = _floats(A_P_u1)
        self.A_P_u2 = _floats(A_P_u2)
        self.D_R = _floats(D_R)
        self.F_R = _floats(F_R)


class ModulationState(DataModel):
    """
    Modulation variables of the equivariant blow-up.

    Attributes
    ----------
    kappa : float
        value of w at the shock location

    tau : float
        predicted blow-up time

    xi : float
        shock latitude (absolute, radians)

    t_tilde : float
        rescaled time the state refers to

    dtau : float
        d tau / d t_tilde

    dxi : float
        d xi / d t_tilde, the speed of the co-moving frame
    """

    def __init__(self, kappa, tau, xi, t_tilde=0.0, dtau=0.0, dxi=0.0):
        self.kappa = float(kappa)
        self.tau = float(tau)
        self.xi = float(xi)
        self.t_tilde = float(t_tilde)
        self.dtau = float(dtau)
        self.dxi = float(dxi)

    @property
    def s(self):
        """Self-similar time -ln(tau - t_tilde)."""
        gap = self.tau - self.t_tilde
        if gap <= 0.0:
            raise PastBlowupError(details='tau={}, t_tilde={}'.format(self.tau, self.t_tilde))
        return -math.log(gap)

    @property
    def beta_tau(self):
        return 1.0 / (1.0 - self.dtau)

    def replace(self, **kwargs):
        dct = dict(self.__dict__)
        dct.update(kwargs)
        return ModulationState(**dct)


class OriginConstraints(DataModel):
    """
    Value and theta-derivatives of w (and z) at the shock location.
    """

    def __init__(self, w_at_xi, dw, d2w, d3w, z_at_xi=None, dz=None, d2z=None):
        self.w_at_xi = float(w_at_xi)
        self.dw = float(dw)
        self.d2w = float(d2w)
        self.d3w = float(d3w)
        self.z_at_xi = None if z_at_xi is None else float(z_at_xi)
        self.dz = None if dz is None else float(dz)
        self.d2z = None if d2z is None else float(d2z)


class EquivariantState(DataModel):
    """
    Riemann variables of the equivariant flow on a uniform co-moving latitude grid.

    Attributes
    ----------
    grid : numpy.ndarray
        uniform samples of theta_tilde = theta - xi_frame

    w, z : numpy.ndarray
        Riemann variables on the grid

    t_tilde : float
        rescaled time

    xi_frame : float
        absolute latitude of the co-moving origin

    support : tuple
        (left, right) extent in theta_tilde of the non-background region, None when empty
    """

    def __init__(self, grid, w, z, t_tilde=0.0, xi_frame=0.0, support=None):
        self.grid = np.asarray(grid, dtype=float)
        self.w = np.asarray(w, dtype=float)
        self.z = np.asarray(z, dtype=float)
        self.t_tilde = float(t_tilde)
        self.xi_frame = float(xi_frame)
        self.support = None if support is None else tuple(float(v) for v in support)

    @property
    def dx(self):
        return float(self.grid[1] - self.grid[0])

    @property
    def sigma(self):
        return 0.5 * (self.w - self.z)

    @property
    def velocity(self):
        return 0.5 * (self.w + self.z)

    def replace(self, **kwargs):
        dct = dict(self.__dict__)
        dct.update(kwargs)
        return EquivariantState(**dct)


class SelfSimField(DataModel):
    """
    Self-similar fields W, Z on the rescaled grid y at time s.

    Attributes
    ----------
    s : float

    y : numpy.ndarray
        (theta_tilde - theta_origin) * exp(3s/2)

    W, Z : numpy.ndarray
        W = exp(s/2) (w - kappa), Z = z

    kappa : float

    theta_origin : float
        co-moving position of the shock

    t_tilde, xi_frame : float
        time and frame of the source state

    W_derivs, Z_derivs : list of numpy.ndarray
        y-derivatives of order 1..4, None when not computed
    """

    def __init__(self, s, y, W, Z, kappa=0.0, theta_origin=0.0, t_tilde=0.0, xi_frame=0.0,
                 W_derivs=None, Z_derivs=None):
        self.s = float(s)
        self.y = np.asarray(y, dtype=float)
        self.W = np.asarray(W, dtype=float)
        self.Z = np.asarray(Z, dtype=float)
        self.kappa = float(kappa)
        self.theta_origin = float(theta_origin)
        self.t_tilde = float(t_tilde)
        self.xi_frame = float(xi_frame)
        self.W_derivs = None if W_derivs is None else [np.asarray(d, dtype=float) for d in W_derivs]
        self.Z_derivs = None if Z_derivs is None else [np.asarray(d, dtype=float) for d in Z_derivs]
