"""
s2shock: modulation.py

Tracking of the modulation variables (kappa, tau, xi): extremal tracking of
the steepest point, the modulation ODE right-hand sides evaluated from the
field at the shock, the ODE tracker and the cross-validation of both.

License: MIT
"""

import logging
import math

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .data_models import ModulationState, OriginConstraints
from .exceptions import MarginError, PastBlowupError, RhsDegenerateError
from .result_models import CrossValidationReport
from .schemes import STENCIL_HALF_WIDTH, centered_derivative, centered_derivatives, cubic_interpolate

__all__ = ['constraints_from_field', 'extremal_details', 'track_extremal', 'origin_z', 'ode_rhs',
           'integrate_ode_tracker', 'cross_validate', 'MARGIN_CELLS', 'TIE_TOLERANCE', 'RHS_DEGENERATE_LIMIT']

logger = logging.getLogger(__name__)

MARGIN_CELLS = 4
TIE_TOLERANCE = 1e-8
RHS_DEGENERATE_LIMIT = 0.1


def constraints_from_field(state, xi):
    """
    Value and theta-derivatives of w (and z) at the absolute latitude xi.

    Derivatives come from fourth-order centered stencils, values at xi from
    four-point cubic interpolation.

    Parameters
    ----------
    state : :class:`~s2shock.EquivariantState`

    xi : float
        absolute latitude, at least four cells plus a stencil inside the grid

    Returns
    -------
    :class:`~s2shock.OriginConstraints`
    """
    grid, dx = state.grid, state.dx
    theta = xi - state.xi_frame
    margin = (MARGIN_CELLS + STENCIL_HALF_WIDTH) * dx
    if not grid[0] + margin <= theta <= grid[-1] - margin:
        raise MarginError(details='theta_tilde={} outside [{}, {}]'.format(theta, grid[0] + margin,
                                                                          grid[-1] - margin))
    dw = centered_derivatives(state.w, dx, 3)
    dz = centered_derivatives(state.z, dx, 2)
    w0, w1, w2, w3, z0, z1, z2 = cubic_interpolate(grid, [state.w] + dw + [state.z] + dz, theta)
    return OriginConstraints(w0, w1, w2, w3, z0, z1, z2)


def extremal_details(state, dw=None):
    """
    Locate the steepest compression of w.

    The discrete argmin of dw/dtheta is refined by a parabola through its
    neighbours. Near-ties within a relative 1e-8 of a negative minimum that are not
    adjacent cells make the result ambiguous; the leftmost is kept.

    Returns
    -------
    dict
        xi (absolute), theta_tilde, kappa, tau, slope, ambiguous, index
    """
    grid, dx = state.grid, state.dx
    if dw is None:
        dw = centered_derivative(state.w, dx, 1)
    fmin = float(np.min(dw))
    candidates = np.flatnonzero(dw <= fmin + TIE_TOLERANCE * max(1.0, abs(fmin)))
    # a flat field has no steepest point to disagree on
    ambiguous = fmin < 0.0 and bool(np.any(np.diff(candidates) > 1))
    i = int(candidates[0])

    shift, slope = 0.0, float(dw[i])
    if 0 < i < dw.size - 1:
        fm, f0, fp = dw[i - 1], dw[i], dw[i + 1]
        curvature = fm - 2.0 * f0 + fp
        if curvature > 0.0:
            shift = float(np.clip(0.5 * (fm - fp) / curvature, -0.5, 0.5))
            slope = float(f0 - 0.25 * (fm - fp) * shift)

    theta = grid[i] + shift * dx
    kappa = cubic_interpolate(grid, state.w, theta)
    tau = state.t_tilde + 1.0 / abs(slope) if slope < 0.0 else math.inf
    return {'xi': theta + state.xi_frame, 'theta_tilde': theta, 'kappa': kappa, 'tau': tau, 'slope': slope,
            'ambiguous': ambiguous, 'index': i}


def track_extremal(state, dw=None):
    """
    Modulation variables from the steepest point of w.

    Parameters
    ----------
    state : :class:`~s2shock.EquivariantState`

    dw : numpy.ndarray
        precomputed dw/dtheta, optional

    Returns
    -------
    (float, float, float)
        xi at the refined argmin of dw/dtheta, kappa = w(xi), tau = t + 1 / |dw/dtheta(xi)|
    """
    found = extremal_details(state, dw)
    if found['ambiguous']:
        logger.warning('steepest point not unique at t=%.6e, keeping leftmost xi=%.9f', state.t_tilde, found['xi'])
    return found['xi'], found['kappa'], found['tau']


def origin_z(constraints, modulation):
    """(Z0, dZ0, d2Z0) in self-similar units from the theta-derivatives of z at the shock."""
    s = modulation.s
    return (constraints.z_at_xi, math.exp(-1.5 * s) * constraints.dz, math.exp(-3.0 * s) * constraints.d2z)


def ode_rhs(constraints, modulation, betas, Z0, dZ0, d2Z0, flat_mode=False):
    """
    Rates of the modulation variables from the field at the shock.

    Parameters
    ----------
    constraints : :class:`~s2shock.OriginConstraints`
        w and its theta-derivatives at xi

    modulation : :class:`~s2shock.ModulationState`
        supplies s, beta_tau, kappa and the absolute xi

    betas : :class:`~s2shock.BetaConstants`

    Z0, dZ0, d2Z0 : float
        Z and its first two y-derivatives at the origin

    flat_mode : bool
        drop the curvature forcing

    Returns
    -------
    (float, float, float)
        d kappa / dt, d tau / dt, d xi / dt
    """
    s, bt, kappa = modulation.s, modulation.beta_tau, modulation.kappa
    grow = math.exp(0.5 * s)

    d3W = math.exp(-4.0 * s) * constraints.d3w
    if not abs(d3W) >= RHS_DEGENERATE_LIMIT:
        raise RhsDegenerateError(details='|d3W(0)|={:.3e} < {}'.format(abs(d3W), RHS_DEGENERATE_LIMIT))

    # theta-derivatives of z recovered from the self-similar ones
    z0, z1, z2 = Z0, math.exp(1.5 * s) * dZ0, math.exp(3.0 * s) * d2Z0
    w0, w1, w2 = constraints.w_at_xi, constraints.dw, constraints.d2w
    q0 = w0 ** 2 - z0 ** 2
    q1 = 2.0 * (w0 * w1 - z0 * z1)
    q2 = 2.0 * (w1 ** 2 + w0 * w2 - z1 ** 2 - z0 * z2)
    if flat_mode:
        p0 = p1 = p2 = 0.0
    else:
        T0 = math.tan(modulation.xi)
        T1 = 1.0 + T0 ** 2
        T2 = 2.0 * T0 * T1
        p0 = T0 * q0
        p1 = T1 * q0 + T0 * q1
        p2 = T2 * q0 + 2.0 * T1 * q1 + T0 * q2

    c = 0.5 * bt * betas.beta3 / grow
    F0 = c * p0
    F1 = c * math.exp(-1.5 * s) * p1
    F2 = c * math.exp(-3.0 * s) * p2
    G1 = bt * grow * betas.beta2 * dZ0
    G2 = bt * grow * betas.beta2 * d2Z0
    G0 = (F2 + G2) / d3W

    dkappa = grow / bt * (F0 + G0)
    dtau = (F1 + G1) / bt
    dxi = kappa + betas.beta2 * Z0 - G0 / (grow * bt)
    return dkappa, dtau, dxi


def integrate_ode_tracker(modulation, state, betas, dt, flat_mode=False):
    """
    Advance the modulation variables by one forward-Euler step of the ODE rates.

    Falls back to extremal tracking when the rates are degenerate or the
    shock is too close to the grid boundary.

    Returns
    -------
    (:class:`~s2shock.ModulationState`, bool)
        the new state and whether the fallback was taken
    """
    try:
        constraints = constraints_from_field(state, modulation.xi)
        rates = ode_rhs(constraints, modulation, betas, *origin_z(constraints, modulation), flat_mode=flat_mode)
    except (RhsDegenerateError, MarginError, PastBlowupError) as e:
        logger.warning('modulation rates unavailable at t=%.6e (%s), falling back to extremal tracking',
                       state.t_tilde, e.code)
        found = extremal_details(state)
        z_at = cubic_interpolate(state.grid, state.z, found['theta_tilde'])
        fallback = ModulationState(found['kappa'], found['tau'], found['xi'], state.t_tilde + dt,
                                   dtau=modulation.dtau, dxi=found['kappa'] + betas.beta2 * z_at)
        return fallback, True

    dkappa, dtau, dxi = rates
    return ModulationState(modulation.kappa + dt * dkappa, modulation.tau + dt * dtau, modulation.xi + dt * dxi,
                           modulation.t_tilde + dt, dtau=dtau, dxi=dxi), False


def _max_abs(values):
    values = values[np.isfinite(values)]
    return float(np.max(np.abs(values))) if values.size else 0.0


def cross_validate(record, config=None):
    """
    Compare the extremal tracker with the integrated modulation rates and check the modulation bounds.

    Parameters
    ----------
    record : :class:`~s2shock.result_models.RunRecord`
        samples carry t, s, kappa, tau, xi, the extremal values kappa_ext, tau_ext, xi_ext
        (used for the deviations when present) and the logged rates dkappa_ode, dtau_ode, dxi_ode

    config : dict
        resolved configuration, defaults to the one stored in the record

    Returns
    -------
    :class:`~s2shock.result_models.CrossValidationReport`
    """
    config = config or record.config
    solver, diag = config['solver'], config['diagnostics']
    M, tau0, xi0 = diag['M'], solver['tau0'], solver['xi0']
    kappa0 = solver['sigma_inf']
    beta3 = (solver['gamma'] - 1.0) / (solver['gamma'] + 1.0)

    report = CrossValidationReport()
    t = record.column('t')
    kappa, tau, xi, s = record.column('kappa'), record.column('tau'), record.column('xi'), record.column('s')
    rates = [record.column(k) for k in ('dkappa_ode', 'dtau_ode', 'dxi_ode')]
    observed = []
    for name, primary in (('kappa_ext', kappa), ('tau_ext', tau), ('xi_ext', xi)):
        column = record.column(name)
        observed.append(column if np.any(np.isfinite(column)) else primary)

    valid = np.isfinite(t) & np.all([np.isfinite(o) for o in observed], axis=0)
    valid &= np.all([np.isfinite(r) for r in rates], axis=0)
    report.n_samples = int(np.count_nonzero(valid))
    if report.n_samples >= 2:
        tv = t[valid]
        deviations = []
        for values, rate in zip(observed, rates):
            integrated = values[valid][0] + cumulative_trapezoid(rate[valid], tv, initial=0.0)
            deviations.append(_max_abs(values[valid] - integrated))
        report.max_dev_kappa, report.max_dev_tau, report.max_dev_xi = deviations

    drift = xi - xi0 - 2.0 * beta3 * kappa0 * t
    report.add_check('kappa', _max_abs(kappa - kappa0), M * tau0, _max_abs(kappa - kappa0) <= M * tau0)
    report.add_check('drift', _max_abs(drift), M ** 2 * tau0 ** 2, _max_abs(drift) <= M ** 2 * tau0 ** 2)
    report.add_check('drift_improved', _max_abs(drift), M ** 1.75 * tau0 ** 2,
                     _max_abs(drift) <= M ** 1.75 * tau0 ** 2)
    report.add_check('tau', _max_abs(tau - tau0), 2.0 * M * tau0 ** 2, _max_abs(tau - tau0) <= 2.0 * M * tau0 ** 2)
    report.add_check('tau_improved', _max_abs(tau - tau0), 1.5 * M * tau0 ** 2,
                     _max_abs(tau - tau0) <= 1.5 * M * tau0 ** 2)
    if report.n_samples:
        dkappa, dtau, dxi = (r[valid] for r in rates)
        report.add_check('dkappa', _max_abs(dkappa), M, _max_abs(dkappa) <= M)
        dxi_dev = _max_abs(dxi - 2.0 * beta3 * kappa0)
        report.add_check('dxi', dxi_dev, M ** 2 * tau0, dxi_dev <= M ** 2 * tau0)
        weighted = _max_abs(dtau * np.exp(s[valid]))
        report.add_check('dtau', weighted, 2.0 * M, weighted <= 2.0 * M)

    for name in report.failed_checks:
        logger.warning('modulation check %s failed: %s', name, report.checks[name])
    return report
