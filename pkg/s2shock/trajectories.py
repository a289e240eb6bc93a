"""
s2shock: trajectories.py

Lagrangian trajectories of self-similar transport fields and the
certificates checked along them: outward growth, weighted time integrals,
leftward drift of the z characteristics and monotone escape.

License: MIT
"""

import logging
import math

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .exceptions import ContractViolation, PersistenceError
from .result_models import TrajectoryPath
from .selfsim import transport_speeds

__all__ = ['integrate_trajectory', 'FrozenTransport', 'growth_certificate', 'weighted_integral',
           'weighted_majorant', 'leftward_certificate', 'escape_certificate', 'ESCAPE_BOX']

logger = logging.getLogger(__name__)

ESCAPE_BOX = 1e12


def integrate_trajectory(V, s1, y0, s_end, tol=1e-9, box=ESCAPE_BOX, tag=''):
    """
    Integrate d Phi / ds = V(s, Phi) from Phi(s1) = y0.

    Parameters
    ----------
    V : callable
        V(s, y) for scalar or 2-vector y

    s1, s_end : float
        start and end time, s_end > s1

    y0 : float or array_like

    tol : float
        relative and absolute tolerance of the adaptive RK45 integrator

    box : float
        escape radius; the path stops with status 'escaped' when |Phi| reaches it

    tag : str
        name of the velocity field

    Returns
    -------
    :class:`~s2shock.result_models.TrajectoryPath`
    """
    if not s_end > s1:
        raise ContractViolation('s_end must exceed s1', details='s1={}, s_end={}'.format(s1, s_end))
    scalar = np.ndim(y0) == 0
    start = np.atleast_1d(np.asarray(y0, dtype=float))

    def fun(s, y):
        v = V(s, y[0] if scalar else y)
        return np.atleast_1d(np.asarray(v, dtype=float))

    def escape(s, y):
        return box - float(np.max(np.abs(y)))
    escape.terminal = True

    sol = solve_ivp(fun, (s1, s_end), start, method='RK45', rtol=tol, atol=tol, events=escape)
    if not sol.success:
        raise ContractViolation('trajectory integration failed', details=sol.message)

    path = TrajectoryPath(s1, y0, tag)
    path.s = sol.t
    phi = sol.y.T
    velocity = np.array([fun(s, y) for s, y in zip(sol.t, phi)])
    path.phi = phi[:, 0] if scalar else phi
    path.velocity = velocity[:, 0] if scalar else velocity
    if sol.status == 1:
        path.status = 'escaped'
        logger.debug('trajectory from y0=%s escaped at s=%.6f', y0, sol.t[-1])
    if path.s.size >= 2:
        path._dense = CubicHermiteSpline(path.s, path.phi, path.velocity, axis=0)
    else:
        path._dense = lambda s, _phi=path.phi[0]: np.broadcast_to(_phi, np.shape(s))
    return path


class FrozenTransport(object):
    """
    Time-sliced transport field 3y/2 + g built from self-similar snapshots.

    Between two snapshot times the speed is interpolated linearly in s; in
    y each slice is interpolated linearly with constant extension.

    Parameters
    ----------
    s : array_like
        increasing snapshot times

    y : list of numpy.ndarray
        y grid of each snapshot

    g : list of numpy.ndarray
        transport speed without the 3y/2 stretching on each grid

    tag : str
        'W' or 'Z'
    """

    def __init__(self, s, y, g, tag='W'):
        super(FrozenTransport, self).__init__()

        self.s = np.asarray(s, dtype=float)
        if self.s.size == 0 or self.s.size != len(y) or len(y) != len(g):
            raise ContractViolation('snapshot times, grids and speeds must match in number')
        if np.any(np.diff(self.s) <= 0.0):
            raise ContractViolation('snapshot times must increase')
        self.y = [np.asarray(a, dtype=float) for a in y]
        self.g = [np.asarray(a, dtype=float) for a in g]
        self.tag = tag

    @classmethod
    def from_fields(cls, fields, modulations, betas, tag='W'):
        """From SelfSimField snapshots and the modulation state at each of them."""
        speeds = [transport_speeds(f, m, betas)[0 if tag == 'W' else 1] for f, m in zip(fields, modulations)]
        return cls([f.s for f in fields], [f.y for f in fields], speeds, tag)

    @classmethod
    def from_csv(cls, paths, tag='W'):
        """From selfsim CSV files with columns s, y, g_W and g_Z."""
        column = 'g_W' if tag == 'W' else 'g_Z'
        s, y, g = [], [], []
        for path in paths:
            try:
                table = np.genfromtxt(str(path), delimiter=',', names=True)
            except (IOError, OSError) as e:
                raise PersistenceError(details='{}: {}'.format(path, e))
            s.append(float(table['s'][0]))
            y.append(table['y'])
            g.append(table[column])
        order = np.argsort(s)
        return cls([s[i] for i in order], [y[i] for i in order], [g[i] for i in order], tag)

    def _slice(self, k, y):
        return np.interp(y, self.y[k], self.g[k])

    def __call__(self, s, y):
        if s <= self.s[0]:
            g = self._slice(0, y)
        elif s >= self.s[-1]:
            g = self._slice(self.s.size - 1, y)
        else:
            k = int(np.searchsorted(self.s, s)) - 1
            weight = (s - self.s[k]) / (self.s[k + 1] - self.s[k])
            g = (1.0 - weight) * self._slice(k, y) + weight * self._slice(k + 1, y)
        return 1.5 * y + g


def _norm(phi):
    phi = np.asarray(phi, dtype=float)
    return np.abs(phi) if phi.ndim == 1 else np.linalg.norm(phi, axis=1)


def growth_certificate(path, rate):
    """
    min over samples of |Phi(s)| - |y0| exp(rate (s - s1)).

    A non-negative margin certifies the lower bound along the path.
    """
    start = float(np.linalg.norm(np.atleast_1d(path.y0)))
    return float(np.min(_norm(path.phi) - start * np.exp(rate * (path.s - path.s1))))


def weighted_integral(path, p, s_end=None):
    """
    Integral of <Phi(s)>^-p along the path by adaptive quadrature of the dense output.

    Parameters
    ----------
    path : :class:`~s2shock.result_models.TrajectoryPath`

    p : float
        weight exponent in (1/10, 10)

    s_end : float
        upper limit, defaults to the end of the path

    Returns
    -------
    float
    """
    if not 0.1 < p < 10.0:
        raise ContractViolation('weight exponent out of range', details='p={!r}'.format(p))
    upper = path.s_end if s_end is None else min(s_end, path.s_end)

    def integrand(s):
        phi = np.atleast_1d(path(s))
        return (1.0 + float(phi @ phi)) ** (-0.5 * p)

    value, _ = quad(integrand, path.s1, upper, limit=500, epsabs=1e-12, epsrel=1e-10)
    return float(value)


def weighted_majorant(y0, p, l, L, tau0):
    """
    Upper bound for the weighted integral from y0: -4 ln l when |y0| >= l,
    tightened to tau0^(p/11) when |y0| >= L; inf below l.
    """
    r = float(np.linalg.norm(np.atleast_1d(y0)))
    bound = math.inf
    if r >= l:
        bound = -4.0 * math.log(l)
    if r >= L:
        bound = min(bound, tau0 ** (p / 11.0))
    return bound


def leftward_certificate(path, beta3, kappa0):
    """
    Margin of d Phi / ds <= -1/2 beta3 kappa0 exp(s/2) on the samples with Phi <= beta3 kappa0 exp(s/2).

    Returns inf when no sample qualifies.
    """
    threshold = beta3 * kappa0 * np.exp(0.5 * path.s)
    active = path.phi <= threshold
    if not np.any(active):
        return math.inf
    return float(np.min(-0.5 * threshold[active] - path.velocity[active]))


def escape_certificate(path, l, slack=1e-6):
    """
    Margin of monotone escape from {|y| < l}.

    From the first sample s_e with |Phi| >= l on, min of |Phi(s)| - l exp((s - s_e)/3 - slack);
    inf when the path never reaches l.
    """
    r = _norm(path.phi)
    out = np.flatnonzero(r >= l)
    if out.size == 0:
        return math.inf
    first = out[0]
    return float(np.min(r[first:] - l * np.exp((path.s[first:] - path.s[first]) / 3.0 - slack)))
