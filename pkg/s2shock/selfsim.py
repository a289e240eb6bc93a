"""
s2shock: selfsim.py

Self-similar variables of the equivariant flow and the bound families
monitored on them: the bootstrap bounds (BA) and the tighter initial
bounds (IB0), the distance to the Burgers profile, and the transport speeds
and forcing terms of the rescaled system.

License: MIT
"""

import math

import numpy as np

from .data_models import EquivariantState, SelfSimField
from .exceptions import ContractViolation
from .profile import w1d, w1d_deriv
from .result_models import BootstrapReport
from .schemes import centered_derivatives

__all__ = ['to_selfsimilar', 'from_selfsimilar', 'bootstrap_report', 'bound_table', 'profile_distance',
           'transport_speeds', 'forcing_terms', 'region_mask', 'FAMILIES', 'SUPPORT_HALF_WIDTH', 'RESOLVED_FRACTION']

FAMILIES = ('BA', 'IB0')

# support half-width about xi0: the bootstrap set and the initial support
SUPPORT_HALF_WIDTH = {'BA': 0.5, 'IB0': 0.1}

# share of a bound the stencil error on the sampled profile may take
RESOLVED_FRACTION = 0.25


def _bracket(y):
    return np.sqrt(1.0 + y * y)


def to_selfsimilar(state, modulation, derivatives=True):
    """
    Self-similar fields of an equivariant state.

    y = (theta_tilde - theta_xi) exp(3s/2), W = exp(s/2) (w - kappa), Z = z,
    where theta_xi is the co-moving position of the shock. Derivative fields
    are taken in theta_tilde and rescaled.

    Parameters
    ----------
    state : :class:`~s2shock.EquivariantState`

    modulation : :class:`~s2shock.ModulationState`
        tau must exceed t_tilde

    derivatives : bool
        also fill W_derivs and Z_derivs (orders 1 to 4)

    Returns
    -------
    :class:`~s2shock.SelfSimField`
    """
    s = modulation.s
    origin = modulation.xi - state.xi_frame
    grow = math.exp(0.5 * s)
    stretch = math.exp(1.5 * s)
    W_derivs = Z_derivs = None
    if derivatives:
        dw = centered_derivatives(state.w, state.dx, 4)
        dz = centered_derivatives(state.z, state.dx, 4)
        W_derivs = [grow * d / stretch ** k for k, d in enumerate(dw, 1)]
        Z_derivs = [d / stretch ** k for k, d in enumerate(dz, 1)]
    return SelfSimField(s, (state.grid - origin) * stretch, grow * (state.w - modulation.kappa), state.z,
                        kappa=modulation.kappa, theta_origin=origin, t_tilde=state.t_tilde,
                        xi_frame=state.xi_frame, W_derivs=W_derivs, Z_derivs=Z_derivs)


def from_selfsimilar(field, support=None):
    """Inverse of :func:`to_selfsimilar`."""
    grid = field.y * math.exp(-1.5 * field.s) + field.theta_origin
    w = math.exp(-0.5 * field.s) * field.W + field.kappa
    return EquivariantState(grid, w, field.Z, field.t_tilde, field.xi_frame, support)


def region_mask(y, radius):
    """Cells whose extent meets |y| <= radius."""
    dy = np.abs(np.diff(y)).min() if y.size > 1 else 0.0
    return np.abs(y) <= radius + 0.5 * dy


def _requires_derivatives(field):
    if field.W_derivs is None or field.Z_derivs is None or len(field.W_derivs) < 4:
        raise ContractViolation('self-similar derivatives up to order 4 are required')


def bound_table(family, M, tau0, s):
    """
    Constants of a bound family.

    Returns
    -------
    dict
        W: five (constant, bracket exponent) pairs for |d^k W|;
        Wt: three constants on |y| <= L, the origin constant for d^3 Wt and
        the two coefficients of the |y| <= l bound;
        Z: the constant for |Z + sigma_inf| and four for |d^k Z|
    """
    if family == 'BA':
        decay = math.exp(-1.5 * s)
        return {
            'W': [(1.0 + tau0 ** (1.0 / 23.0), 1.0 / 3.0), (15.0, -2.0 / 3.0), (M ** (1.0 / 6.0), -2.0 / 3.0),
                  (M ** 0.5, 0.0), (M, 0.0)],
            'Wt': [tau0 ** (1.0 / 3.0), tau0 ** 0.25, tau0 ** 0.2],
            'Wt_origin': tau0 ** 0.8,
            'Wt_local': (10.0 * M ** 2 * tau0 ** 0.5, tau0 ** 0.6),
            'Z': [M * tau0] + [c * decay for c in (M, M ** (4.0 / 3.0), M ** 6, M ** 7)],
        }
    if family == 'IB0':
        decay = tau0 ** 1.5
        return {
            'W': [(1.0 + tau0 ** (1.0 / 23.0) / 200.0, 1.0 / 3.0), (12.0, -2.0 / 3.0),
                  (M ** 0.125 / 10.0, -2.0 / 3.0), (M ** (1.0 / 3.0) / 4.0, 0.0), (M ** 0.9 / 4.0, 0.0)],
            'Wt': [tau0 ** 0.5 / 4.0, tau0 ** (1.0 / 3.0) / 4.0, tau0 ** 0.25 / 4.0],
            'Wt_origin': tau0 ** 0.8 / 10.0,
            'Wt_local': (M ** 2 * tau0 ** 0.5 / 10.0, tau0 ** 0.6 / 10.0),
            'Z': [M * tau0 / 4.0] + [c * decay / 4.0 for c in (M, M ** (4.0 / 3.0), M ** 6, M ** 7)],
        }
    raise ContractViolation('unknown bound family', details='family={!r}'.format(family))


def _worst(report, name, bound, quantity, y, mask=None):
    if mask is not None:
        bound, quantity, y = bound[mask], quantity[mask], y[mask]
    if y.size == 0:
        return
    slack = bound - np.abs(quantity)
    i = int(np.argmin(slack))
    report.add_margin(name, slack[i], y[i])


def bootstrap_report(field, constants, family='BA'):
    """
    Margins of the bound family on a self-similar field.

    Derivatives of Wt = W - Wbar are stencil derivatives of the difference.
    A Wt bound is only checked where the stencil error on the sampled profile
    stays within RESOLVED_FRACTION of it; the other cells are counted in
    `report.unresolved`.

    Parameters
    ----------
    field : :class:`~s2shock.SelfSimField`
        with W_derivs and Z_derivs

    constants : dict
        M, tau0, l, L, sigma_inf; xi0 (and optionally support_tol) enables the support check;
        local_slack (default 0) is added to the origin and |y| <= l bounds

    family : str
        'BA' or 'IB0'

    Returns
    -------
    :class:`~s2shock.result_models.BootstrapReport`
    """
    _requires_derivatives(field)
    M, tau0 = constants['M'], constants['tau0']
    l, L, sigma_inf = constants['l'], constants['L'], constants['sigma_inf']
    table = bound_table(family, M, tau0, field.s)
    report = BootstrapReport(family, field.s)
    y = field.y
    bracket = _bracket(y)

    W_all = [field.W] + list(field.W_derivs[:4])
    for k, (c, p) in enumerate(table['W']):
        _worst(report, 'W{}'.format(k), c * bracket ** p, W_all[k], y)

    # distance to the profile
    Wbar = w1d(y)
    sampled = centered_derivatives(Wbar, y[1] - y[0], 4)
    tilde = [field.W - Wbar] + [a - b for a, b in zip(field.W_derivs[:4], sampled)]
    error = [np.zeros(y.shape)] + [np.abs(a - w1d_deriv(y, k)) for k, a in enumerate(sampled, 1)]
    inner = region_mask(y, L)
    for k, (c, p) in enumerate(zip(table['Wt'], (1.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0))):
        _resolved_worst(report, 'Wt{}'.format(k), c * bracket ** p, tilde[k], error[k], y, inner)

    slack = constants.get('local_slack', 0.0)
    bound = table['Wt_origin'] + slack
    if float(np.interp(0.0, y, error[3])) <= RESOLVED_FRACTION * bound:
        report.add_margin('Wt3_origin', bound - abs(float(np.interp(0.0, y, tilde[3]))), 0.0)
    else:
        report.unresolved['Wt3_origin'] = 1

    core = region_mask(y, l)
    a, b = table['Wt_local']
    ay = np.abs(y)
    for k in range(5):
        bound = a * ay ** (4 - k) + slack
        if k <= 3:
            bound = bound + b * ay ** (3 - k)
        _resolved_worst(report, 'Wt{}_local'.format(k), bound, tilde[k], error[k], y, core)

    Z_all = [field.Z + sigma_inf] + list(field.Z_derivs[:4])
    for k, c in enumerate(table['Z']):
        _worst(report, 'Z{}'.format(k), np.full(y.shape, c), Z_all[k], y)

    if 'xi0' in constants:
        _support_margin(report, field, constants)
    return report


def _resolved_worst(report, name, bound, quantity, error, y, mask):
    resolved = error <= RESOLVED_FRACTION * bound
    skipped = int(np.count_nonzero(mask & ~resolved))
    if skipped:
        report.unresolved[name] = skipped
    _worst(report, name, bound, quantity, y, mask & resolved)


def _support_margin(report, field, constants):
    tol = constants.get('support_tol', 1e-10)
    w = math.exp(-0.5 * field.s) * field.W + field.kappa
    active = (np.abs(w - constants['sigma_inf']) > tol) | (np.abs(field.Z + constants['sigma_inf']) > tol)
    if not np.any(active):
        return
    # margin in absolute latitude
    theta = field.y * math.exp(-1.5 * field.s) + field.theta_origin + field.xi_frame
    xi0 = constants['xi0']
    half = SUPPORT_HALF_WIDTH[report.family] * xi0
    lo, hi = theta[active].min(), theta[active].max()
    margin = min(lo - (xi0 - half), xi0 + half - hi)
    report.add_margin('support', margin, field.y[active][0] if lo - (xi0 - half) <= xi0 + half - hi
                      else field.y[active][-1])


def profile_distance(field, l, L):
    """
    Weighted distances between W and the profile.

    Returns
    -------
    dict
        'local': sup over |y| <= l of |W - Wbar|,
        'weighted': sup over |y| <= L of <y>^-1/3 |W - Wbar|,
        'gradient': sup over |y| <= L of <y>^2/3 |dW - dWbar|
    """
    y = field.y
    bracket = _bracket(y)
    diff = field.W - w1d(y)
    if field.W_derivs is not None:
        ddiff = field.W_derivs[0] - w1d_deriv(y, 1)
    else:
        ddiff = np.gradient(diff, y)
    core, inner = region_mask(y, l), region_mask(y, L)

    def _sup(values, mask):
        return float(np.max(np.abs(values[mask]))) if np.any(mask) else 0.0

    return {'local': _sup(diff, core),
            'weighted': _sup(bracket ** (-1.0 / 3.0) * diff, inner),
            'gradient': _sup(bracket ** (2.0 / 3.0) * ddiff, inner)}


def transport_speeds(field, modulation, betas):
    """
    Transport speeds (g_W, g_Z) of the rescaled system, without the 3y/2 stretching.

    g_W = beta_tau W + beta_tau exp(s/2) (kappa + beta2 Z - dxi),
    g_Z = beta2 beta_tau W + beta_tau exp(s/2) (beta2 kappa + Z - dxi).
    """
    bt = modulation.beta_tau
    grow = math.exp(0.5 * field.s)
    b2 = betas.beta2
    g_W = bt * field.W + bt * grow * (modulation.kappa + b2 * field.Z - modulation.dxi)
    g_Z = b2 * bt * field.W + bt * grow * (b2 * modulation.kappa + field.Z - modulation.dxi)
    return g_W, g_Z


def forcing_terms(field, modulation, betas, flat_mode=False):
    """Curvature forcing (F_W, F_Z) of the rescaled system; zero in flat mode."""
    if flat_mode:
        zero = np.zeros_like(field.W)
        return zero, zero.copy()
    s = field.s
    tangent = np.tan(field.y * math.exp(-1.5 * s) + modulation.xi)
    w = math.exp(-0.5 * s) * field.W + modulation.kappa
    q = w * w - field.Z * field.Z
    c = 0.5 * modulation.beta_tau * betas.beta3
    return c * math.exp(-0.5 * s) * tangent * q, -c * math.exp(-s) * tangent * q
