"""
s2shock: equivariant.py

The equivariant Euler system in Riemann variables on a co-moving latitude
grid: initial data, right-hand side, the Runge-Kutta step, the run loop up
to a resolved gradient blow-up and the characteristics oracle of the flat
Burgers reduction.

License: MIT
"""

import logging
import math

import numpy as np
from scipy.interpolate import CubicSpline

from .config import ExperimentConfig, SolverConfig
from .data_models import EquivariantState, ModulationState
from .diagnostics import blowup_time, holder_seminorm
from .exceptions import (ContractViolation, DiagnosticUndefinedError, MarginError, OracleDomainError, PastBlowupError,
                         PoleSingularityError, RhsDegenerateError)
from .modulation import constraints_from_field, extremal_details, integrate_ode_tracker, ode_rhs, origin_z
from .profile import w1d
from .result_models import RunRecord
from .riemann import betas as make_betas
from .schemes import centered_derivative, cubic_interpolate, rk4_step, upwind_derivative
from .selfsim import bootstrap_report, profile_distance, to_selfsimilar

__all__ = ['smooth_cutoff', 'solver_domain', 'initial_data', 'characteristic_speeds', 'cfl_limit', 'rhs', 'step',
           'support_extent', 'support_excess', 'exterior_slope', 'run_until_blowup', 'characteristics_oracle',
           'oracle_comparison']

logger = logging.getLogger(__name__)

# slack on the CFL contract for rounding in the caller's dt
_CFL_SLACK = 1e-12


def _smooth_step(x):
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide='ignore', over='ignore'):
        a = np.where(x > 0.0, np.exp(-1.0 / np.where(x > 0.0, x, 1.0)), 0.0)
        b = np.where(x < 1.0, np.exp(-1.0 / np.where(x < 1.0, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def smooth_cutoff(theta, half_width, smooth_width):
    """C-infinity cutoff: 1 on |theta| <= half_width - smooth_width, 0 from half_width on."""
    return _smooth_step((half_width - np.abs(theta)) / smooth_width)


def _as_solver(config):
    if isinstance(config, ExperimentConfig):
        return config.solver.resolved()
    if isinstance(config, SolverConfig):
        return config.resolved()
    raise ContractViolation('expected an ExperimentConfig or SolverConfig', details=type(config).__name__)


def solver_domain(config):
    """Co-moving grid window (theta_min, theta_max), see :meth:`~s2shock.config.SolverConfig.window`."""
    return _as_solver(config).window()


def support_extent(state, sigma_inf, tol):
    """(left, right) in theta_tilde of the region where (w, z) differs from the background, None if empty."""
    active = (np.abs(state.w - sigma_inf) > tol) | (np.abs(state.z + sigma_inf) > tol)
    if not np.any(active):
        return None
    idx = np.flatnonzero(active)
    return float(state.grid[idx[0]]), float(state.grid[idx[-1]])


def initial_data(config):
    """
    Truncated Burgers profile at s0 = -ln tau0.

    w0 = kappa0 + exp(-s0/2) chi W(theta exp(3 s0/2)) with kappa0 = sigma_inf,
    z0 = -sigma_inf, and chi the smooth cutoff of the window (-xi0/10, xi0/10).

    Parameters
    ----------
    config : :class:`~s2shock.config.ExperimentConfig` or :class:`~s2shock.config.SolverConfig`

    Returns
    -------
    :class:`~s2shock.EquivariantState`
    """
    solver = _as_solver(config)
    lo, hi = solver_domain(solver)
    grid = np.linspace(lo, hi, solver.n_cells)
    z = np.full(grid.shape, -solver.sigma_inf)
    if solver.initial_data == 'steady':
        w = np.full(grid.shape, solver.sigma_inf)
    else:
        s0 = -math.log(solver.tau0)
        chi = smooth_cutoff(grid, abs(solver.xi0) / 10.0, solver.smooth_width)
        w = solver.sigma_inf + math.exp(-0.5 * s0) * chi * w1d(grid * math.exp(1.5 * s0))
    state = EquivariantState(grid, w, z, 0.0, solver.xi0)
    return state.replace(support=support_extent(state, solver.sigma_inf, solver.support_tol))


def characteristic_speeds(state, betas, frame_speed):
    """Transport speeds (w + beta2 z - frame_speed, beta2 w + z - frame_speed)."""
    return (state.w + betas.beta2 * state.z - frame_speed,
            betas.beta2 * state.w + state.z - frame_speed)


def _max_speed(state, betas, frame_speed):
    lw, lz = characteristic_speeds(state, betas, frame_speed)
    return max(float(np.max(np.abs(lw))), float(np.max(np.abs(lz))))


def cfl_limit(state, betas, frame_speed, cfl=1.0):
    """Largest dt with max speed * dt <= cfl * dtheta; inf when nothing moves."""
    speed = _max_speed(state, betas, frame_speed)
    return math.inf if speed == 0.0 else cfl * state.dx / speed


def _check_pole(state, margin):
    theta = state.grid[[0, -1]] + state.xi_frame
    if np.max(np.abs(theta)) > 0.5 * math.pi - margin:
        raise PoleSingularityError(details='|theta| reaches {:.6f} with margin {:.6f}'.format(
            float(np.max(np.abs(theta))), margin))


def rhs(state, modulation, betas, config):
    """
    Time derivatives of (w, z).

    Transport speeds use the frame speed modulation.dxi; the curvature
    forcing is 1/2 beta3 (w^2 - z^2) tan(theta) with opposite signs in the
    two equations and vanishes in flat mode.

    Parameters
    ----------
    state : :class:`~s2shock.EquivariantState`

    modulation : :class:`~s2shock.ModulationState`

    betas : :class:`~s2shock.BetaConstants`

    config : :class:`~s2shock.config.SolverConfig`

    Returns
    -------
    (numpy.ndarray, numpy.ndarray)
    """
    lw, lz = characteristic_speeds(state, betas, modulation.dxi)
    dw = -lw * upwind_derivative(state.w, state.dx, lw)
    dz = -lz * upwind_derivative(state.z, state.dx, lz)
    if not config.flat_mode:
        _check_pole(state, config.pole_margin)
        forcing = 0.5 * betas.beta3 * (state.w ** 2 - state.z ** 2) * np.tan(state.grid + state.xi_frame)
        dw = dw + forcing
        dz = dz - forcing
    return dw, dz


def support_excess(old, new, max_speed, dt):
    """Growth of the support beyond max_speed * dt plus one cell, 0 when within."""
    if new.support is None:
        return 0.0
    if old.support is None:
        return float(new.support[1] - new.support[0])
    allowed = max_speed * dt + new.dx
    return max(0.0, old.support[0] - new.support[0] - allowed, new.support[1] - old.support[1] - allowed)


def step(state, modulation, dt, betas, config):
    """
    Advance (w, z) by one four-stage Runge-Kutta step.

    The co-moving frame moves with modulation.dxi over the step.

    Raises
    ------
    ContractViolation
        dt not positive or above the CFL limit
    """
    config = _as_solver(config)
    limit = cfl_limit(state, betas, modulation.dxi)
    if not 0.0 < dt <= limit * (1.0 + _CFL_SLACK):
        raise ContractViolation('time step violates the CFL limit', details='dt={!r}, limit={!r}'.format(dt, limit))

    def stage_rhs(t, y):
        xi_frame = state.xi_frame + modulation.dxi * (t - state.t_tilde)
        stage = EquivariantState(state.grid, y[0], y[1], t, xi_frame)
        return rhs(stage, modulation, betas, config)

    w, z = rk4_step(stage_rhs, (state.w, state.z), state.t_tilde, dt)
    new = EquivariantState(state.grid, w, z, state.t_tilde + dt, state.xi_frame + modulation.dxi * dt)
    new = new.replace(support=support_extent(new, config.sigma_inf, config.support_tol))
    excess = support_excess(state, new, _max_speed(state, betas, modulation.dxi), dt)
    if excess > 0.0:
        logger.warning('support grew %.3e beyond the propagation bound at t=%.6e', excess, new.t_tilde)
    return new


def exterior_slope(state, theta_shock, delta):
    """sup of max(|d v|, |d sigma|) over |theta_tilde - theta_shock| > delta, 0 on an empty set."""
    mask = np.abs(state.grid - theta_shock) > delta
    if not np.any(mask):
        return 0.0
    dv = centered_derivative(state.velocity, state.dx, 1)
    ds = centered_derivative(state.sigma, state.dx, 1)
    return float(max(np.max(np.abs(dv[mask])), np.max(np.abs(ds[mask]))))


def _tracker_speed(found, state, betas):
    z_at = float(np.interp(found['theta_tilde'], state.grid, state.z))
    return found['kappa'] + betas.beta2 * z_at


def _frame_speed(solver, coupled_speed):
    if solver.flat_mode or not solver.modulation_coupling:
        return solver.frame_speed
    return coupled_speed


def _finite_margin(pair):
    margin, name = pair
    return (margin, name) if math.isfinite(margin) else (None, None)


class _RunLoop(object):
    """State of one run: the field, the modulation variables and the record being filled."""

    def __init__(self, config):
        self.config = config
        self.solver = config.solver
        self.diag = config.diagnostics
        self.betas = make_betas(self.solver.gamma)
        self.record = RunRecord(config=config.to_dict())
        self.state = initial_data(self.solver)
        self.modulation = ModulationState(self.solver.sigma_inf, self.solver.tau0, self.solver.xi0, 0.0,
                                          dtau=0.0, dxi=self.solver.frame_speed)
        self.offset = 0.0
        self.n_samples = 0
        self.last_sample = None

    def _constants(self):
        return {'M': self.diag.M, 'tau0': self.solver.tau0, 'l': self.diag.l, 'L': self.diag.L,
                'sigma_inf': self.solver.sigma_inf, 'xi0': self.solver.xi0, 'support_tol': self.solver.support_tol}

    def track(self, dw):
        """Update the modulation variables from the current field (extremal tracker)."""
        found = extremal_details(self.state, dw)
        if found['ambiguous']:
            self.record.counters['ambiguous_extremum'] += 1
            logger.warning('steepest point not unique at t=%.6e, keeping leftmost xi=%.9f', self.state.t_tilde,
                           found['xi'])
        if found['slope'] < 0.0:
            self.offset = found['theta_tilde']
            speed = _tracker_speed(found, self.state, self.betas)
            return found, ModulationState(found['kappa'], found['tau'], found['xi'], self.state.t_tilde,
                                          dtau=self.modulation.dtau, dxi=_frame_speed(self.solver, speed))
        # no compression: the shock position rides with the frame
        return found, ModulationState(self.modulation.kappa, math.inf, self.state.xi_frame + self.offset,
                                      self.state.t_tilde, dtau=self.modulation.dtau,
                                      dxi=_frame_speed(self.solver, self.modulation.dxi))

    def ode_rates(self, modulation):
        try:
            constraints = constraints_from_field(self.state, modulation.xi)
            return ode_rhs(constraints, modulation, self.betas, *origin_z(constraints, modulation),
                           flat_mode=self.solver.flat_mode)
        except (RhsDegenerateError, MarginError, PastBlowupError) as e:
            logger.debug('modulation rates unavailable at t=%.6e: %s', self.state.t_tilde, e.code)
            return None

    def sample(self, found, slope, extremal):
        state, mod = self.state, self.modulation
        extremal_mode = self.config.modulation.tracker == 'extremal'
        if extremal_mode and self.last_sample is not None and math.isfinite(mod.tau) \
                and self.last_sample['tau'] is not None:
            elapsed = state.t_tilde - self.last_sample['t']
            if elapsed > 0.0:
                mod = mod.replace(dtau=(mod.tau - self.last_sample['tau']) / elapsed)
                self.modulation = mod
        finite_tau = math.isfinite(mod.tau) and mod.tau > state.t_tilde
        support = state.support or (None, None)
        smp = {
            't': state.t_tilde, 'step': self.record.counters['steps'],
            's': mod.s if finite_tau else None,
            'kappa': mod.kappa, 'tau': mod.tau if finite_tau else None, 'xi': mod.xi,
            'dtau': mod.dtau, 'frame_speed': mod.dxi, 'xi_frame': state.xi_frame,
            'kappa_ext': extremal.kappa, 'tau_ext': extremal.tau if math.isfinite(extremal.tau) else None,
            'xi_ext': extremal.xi,
            'max_slope': slope, 'slope_location': found['xi'],
            'dy': state.dx * slope ** 1.5 if slope > 0.0 else None,
            'min_sigma': float(np.min(state.sigma)),
            'holder': holder_seminorm(state.grid, state.w, self.diag.holder_exponent),
            'support_left': support[0], 'support_right': support[1],
            'exterior_slope': exterior_slope(state, mod.xi - state.xi_frame, self.diag.delta),
            'dkappa_ode': None, 'dtau_ode': None, 'dxi_ode': None,
        }
        if finite_tau:
            if self.n_samples % self.config.modulation.validate_every == 0:
                rates = self.ode_rates(mod)
                if rates is not None:
                    smp['dkappa_ode'], smp['dtau_ode'], smp['dxi_ode'] = rates
            self._selfsim(smp, mod)

        output = self.config.output
        if output.snapshot_every and self.n_samples % output.snapshot_every == 0:
            self.record.field_snapshots.append(state)
        self.record.append(smp)
        self.last_sample = smp
        self.n_samples += 1
        logger.debug('t=%.6e slope=%.4e kappa=%.6f tau=%s xi=%.6f', state.t_tilde, slope, mod.kappa, smp['tau'],
                     mod.xi)

    def _selfsim(self, smp, mod):
        every = self.diag.bootstrap_every
        emit = self.config.output.emit_selfsim
        wants_report = every and self.n_samples % every == 0
        wants_snapshot = emit and self.n_samples % emit == 0
        if not (wants_report or wants_snapshot or self.n_samples == 0):
            return
        field = to_selfsimilar(self.state, mod)
        dy = field.y[1] - field.y[0]
        # the origin lies within half a cell of the nearest grid point
        constants = dict(self._constants(), local_slack=dy ** 2)
        if wants_report:
            report = bootstrap_report(field, constants, 'BA')
            smp['bootstrap_min_margin'], smp['bootstrap_worst'] = _finite_margin(report.bound_margin)
            smp['profile_min_margin'], smp['profile_worst'] = _finite_margin(report.profile_margin)
            smp['profile_unresolved'] = sum(report.unresolved.values())
            distance = profile_distance(field, self.diag.l, self.diag.L)
            for name in ('local', 'weighted', 'gradient'):
                smp['profile_distance_' + name] = distance[name]
            smp['W_origin'] = cubic_interpolate(field.y, field.W, 0.0)
            smp['dW_origin_plus_one'] = cubic_interpolate(field.y, field.W_derivs[0], 0.0) + 1.0
        if self.n_samples == 0:
            report = bootstrap_report(field, constants, 'IB0')
            smp['ib0_min_margin'] = report.min_margin
            smp['ib0_worst'] = report.worst_name
        if wants_snapshot:
            self.record.selfsim_snapshots.append((field, mod))

    def stop_reason(self, slope):
        state, solver = self.state, self.solver
        if not (np.all(np.isfinite(state.w)) and np.all(np.isfinite(state.z))):
            return 'numerical_failure'
        if np.min(state.sigma) <= 0.0:
            return 'vacuum'
        if slope >= solver.blowup_slope_cap:
            return 'slope_cap'
        if slope > 0.0 and 2.0 * slope ** -1.5 < solver.resolution_cells * state.dx:
            return 'resolution'
        if state.t_tilde >= solver.t_max - solver.dt_floor:
            return 'max_time'
        return None

    def time_step(self, slope):
        solver = self.solver
        dt = min(cfl_limit(self.state, self.betas, self.modulation.dxi, solver.cfl), solver.t_max - self.state.t_tilde)
        if slope > 0.0:
            dt = min(dt, solver.slope_cfl / slope)
        return dt

    def advance(self, dt):
        old = self.state
        max_speed = _max_speed(old, self.betas, self.modulation.dxi)
        if self.config.modulation.tracker == 'ode' and math.isfinite(self.modulation.tau):
            mod, fell_back = integrate_ode_tracker(self.modulation, old, self.betas, dt, self.solver.flat_mode)
            self.record.counters['ode_fallback'] += int(fell_back)
            next_mod = mod.replace(dxi=_frame_speed(self.solver, mod.dxi))
        else:
            next_mod = None
        self.state = step(old, self.modulation, dt, self.betas, self.solver)
        if support_excess(old, self.state, max_speed, dt) > 0.0:
            self.record.counters['support_excess'] += 1
        self.record.counters['steps'] += 1
        return next_mod

    def run(self):
        solver = self.solver
        logger.info('run start: gamma=%g tau0=%g n_cells=%d flat_mode=%s tracker=%s', solver.gamma, solver.tau0,
                    solver.n_cells, solver.flat_mode, self.config.modulation.tracker)
        ode_mod = None
        while True:
            dw = centered_derivative(self.state.w, self.state.dx, 1)
            slope = math.nan
            if np.all(np.isfinite(dw)):
                found, extremal = self.track(dw)
                self.modulation = ode_mod if ode_mod is not None else extremal
                # refined at the sub-cell extremum
                slope = max(0.0, -found['slope'])
            reason = self.stop_reason(slope) if math.isfinite(slope) else 'numerical_failure'
            dt = None
            if reason is None:
                dt = self.time_step(slope)
                if dt < solver.dt_floor:
                    reason = 'dt_floor'
            steps = self.record.counters['steps']
            sampled = math.isfinite(slope) and (reason is not None or steps % solver.sample_every == 0)
            if sampled:
                self.sample(found, slope, extremal)
            if reason is not None:
                break
            try:
                ode_mod = self.advance(dt)
            except PoleSingularityError as e:
                logger.error('run stopped at t=%.6e: %s', self.state.t_tilde, e)
                reason = 'pole_singularity'
                if not sampled:
                    self.sample(found, slope, extremal)
                break

        self.record.stop_reason = reason
        self.record.status = {'slope_cap': 'blew_up', 'resolution': 'blew_up', 'dt_floor': 'blew_up'}.get(reason,
                                                                                                            reason)
        if self.record.status == 'blew_up':
            try:
                self.record.t_star = blowup_time(self.record)
            except DiagnosticUndefinedError as e:
                logger.warning('blow-up time undefined: %s', e)
        logger.info('run stop: status=%s reason=%s t=%.6e steps=%d T*=%s', self.record.status, reason,
                    self.state.t_tilde, self.record.counters['steps'], self.record.t_star)
        return self.record


def run_until_blowup(config):
    """
    Integrate from the initial data until the gradient blows up or a stop criterion fires.

    Stops, in this order: non-finite field (numerical_failure), min sigma <= 0
    (vacuum), max compressive slope >= blowup_slope_cap, self-similar core
    narrower than resolution_cells cells, dt below dt_floor (these three give
    status blew_up) and t >= t_max (max_time). A step that would take the grid
    past the pole margin ends the run with status pole_singularity. A sample
    is recorded every sample_every steps and at the stop; the modulation rates
    are evaluated on every modulation.validate_every-th sample.

    Parameters
    ----------
    config : :class:`~s2shock.config.ExperimentConfig` or :class:`~s2shock.config.SolverConfig`

    Returns
    -------
    :class:`~s2shock.result_models.RunRecord`
    """
    if isinstance(config, SolverConfig):
        config = ExperimentConfig(solver=config)
    if not isinstance(config, ExperimentConfig):
        raise ContractViolation('expected an ExperimentConfig or SolverConfig', details=type(config).__name__)
    return _RunLoop(config.resolved()).run()


def characteristics_oracle(grid, w0, t, shift=0.0, dw0=None):
    """
    Exact Burgers solution w_t + (w + shift) w_theta = 0 before the first crossing.

    Characteristics theta0 + (w0(theta0) + shift) t carry w0; the solution on
    the grid is the cubic spline through the transported samples, with edge
    values outside their image.

    Parameters
    ----------
    grid : numpy.ndarray
        uniform grid of the initial samples

    w0 : numpy.ndarray

    t : float
        query time, before the crossing time

    shift : float
        constant added to the transport speed

    dw0 : numpy.ndarray
        dw0/dtheta, centered differences when omitted

    Returns
    -------
    (numpy.ndarray, float)
        solution on grid and first crossing time -1 / min dw0 (inf without compression)
    """
    grid = np.asarray(grid, dtype=float)
    w0 = np.asarray(w0, dtype=float)
    if dw0 is None:
        dw0 = centered_derivative(w0, grid[1] - grid[0], 1)
    steepest = float(np.min(dw0))
    crossing = -1.0 / steepest if steepest < 0.0 else math.inf
    if t >= crossing:
        raise OracleDomainError(details='t={} >= crossing time {}'.format(t, crossing))
    x = grid + (w0 + shift) * t
    spline = CubicSpline(x, w0)
    w = spline(np.clip(grid, x[0], x[-1]))
    w = np.where(grid < x[0], w0[0], np.where(grid > x[-1], w0[-1], w))
    return w, crossing


def oracle_comparison(config, fraction=0.5):
    """
    Sup-norm distance between the flat-mode solver and the characteristics oracle.

    The solver runs with its CFL step from the initial data to `fraction` of
    the crossing time. Only defined for the exact Burgers reduction
    (flat mode with gamma = 3).

    Returns
    -------
    (float, float)
        error and the comparison time
    """
    solver = _as_solver(config)
    b = make_betas(solver.gamma)
    if not solver.flat_mode or b.beta2 != 0.0:
        raise ContractViolation('the oracle needs flat mode with gamma = 3',
                                details='flat_mode={}, gamma={}'.format(solver.flat_mode, solver.gamma))
    state = initial_data(solver)
    w0 = state.w
    _, crossing = characteristics_oracle(state.grid, w0, 0.0, -solver.frame_speed)
    t_end = fraction * crossing
    modulation = ModulationState(solver.sigma_inf, solver.tau0, solver.xi0, 0.0, dxi=solver.frame_speed)
    while state.t_tilde < t_end:
        dt = min(cfl_limit(state, b, solver.frame_speed, solver.cfl), t_end - state.t_tilde)
        state = step(state, modulation, dt, b, solver)
    exact, _ = characteristics_oracle(state.grid, w0, state.t_tilde, -solver.frame_speed)
    return float(np.max(np.abs(state.w - exact))), state.t_tilde
