"""
s2shock: result_models.py

Defines result models returned by the checking, tracking and run operations.

License: MIT
"""

import numpy as np

from .data_models import _to_plain

__all__ = ['Result', 'OriginTable', 'BootstrapReport', 'CrossValidationReport', 'BlowupReport',
           'TrajectoryPath', 'RunRecord', 'SweepResult', 'SCHEMA_VERSION']

SCHEMA_VERSION = 1


class Result(object):
    """Base class for Result classes.

    Attributes
    ----------
    checks : dict
        name -> dict(value, bound, ok) for every pass/fail criterion the operation evaluates
    """
    def __init__(self):
        self.checks = {}

    def add_check(self, name, value, bound, ok):
        self.checks[name] = {'value': float(value), 'bound': float(bound), 'ok': bool(ok)}

    @property
    def passed(self):
        return all(c['ok'] for c in self.checks.values())

    @property
    def failed_checks(self):
        return sorted(name for name, c in self.checks.items() if not c['ok'])

    def to_dict(self):
        return {k: _to_plain(v) for k, v in self.__dict__.items() if not k.startswith('_')}

    def __repr__(self):
        return '{}(passed={}, checks={})'.format(self.__class__.__name__, self.passed, len(self.checks))


class OriginTable(Result):
    """Result class for origin_derivative_table method.

    Attributes
    ----------
    psi, r0 : float

    Q : numpy.ndarray
        skew-symmetric generator the table was evaluated for

    entries : [] dict
        one entry per (quantity, multi-index): name, order, analytic, numeric, error, tolerance, ok
    """
    def __init__(self, psi, Q, r0):
        super(OriginTable, self).__init__()

        self.psi = float(psi)
        self.Q = np.asarray(Q, dtype=float)
        self.r0 = float(r0)
        self.entries = []

    def add_entry(self, name, order, analytic, numeric, tolerance):
        error = abs(analytic - numeric)
        ok = error <= tolerance
        self.entries.append({'name': name, 'order': tuple(order), 'analytic': float(analytic),
                             'numeric': float(numeric), 'error': float(error),
                             'tolerance': float(tolerance), 'ok': bool(ok)})
        self.add_check('{}{}'.format(name, tuple(order)), error, tolerance, ok)


class BootstrapReport(Result):
    """Result class for bootstrap_report method.

    Attributes
    ----------
    family : str
        'BA' for the bootstrap bounds, 'IB0' for the initial bounds

    s : float
        self-similar time of the evaluated field

    margins : dict
        inequality name -> min over the region of bound - |quantity|

    worst : dict
        inequality name -> y where the margin is attained

    unresolved : dict
        profile-distance inequality name -> cells left out because the grid
        cannot resolve the bound
    """
    def __init__(self, family, s):
        super(BootstrapReport, self).__init__()

        self.family = family
        self.s = float(s)
        self.margins = {}
        self.worst = {}
        self.unresolved = {}

    def add_margin(self, name, margin, worst_y):
        self.margins[name] = float(margin)
        self.worst[name] = float(worst_y)
        self.add_check(name, margin, 0.0, margin >= 0.0)

    def _min_over(self, names):
        names = list(names)
        if not names:
            return float('inf'), None
        name = min(names, key=self.margins.get)
        return self.margins[name], name

    @property
    def min_margin(self):
        return self._min_over(self.margins)[0]

    @property
    def worst_name(self):
        return self._min_over(self.margins)[1]

    @property
    def bound_margin(self):
        """(margin, name) over the W, Z and support inequalities."""
        return self._min_over(n for n in self.margins if not n.startswith('Wt'))

    @property
    def profile_margin(self):
        """(margin, name) over the evaluated distance-to-profile inequalities."""
        return self._min_over(n for n in self.margins if n.startswith('Wt'))


class CrossValidationReport(Result):
    """Result class for cross_validate method.

    Attributes
    ----------
    max_dev_kappa, max_dev_tau, max_dev_xi : float
        max over samples of |extremal - integrated ODE| for each modulation variable

    n_samples : int
        samples with a valid ODE right-hand side
    """
    def __init__(self):
        super(CrossValidationReport, self).__init__()

        self.max_dev_kappa = None
        self.max_dev_tau = None
        self.max_dev_xi = None
        self.n_samples = 0


class BlowupReport(Result):
    """Result class for diagnose method.

    Attributes
    ----------
    status : str
        final run status

    T_star : float
        extrapolated blow-up time

    T_star_tracker : float
        modulation tau at the last sample

    rate_exponent : float
        fitted exponent of max slope against T* - t, expected -1

    rate_stderr : float
        standard error of the fitted exponent

    xi_star : float
        tracked shock location at the last sample

    drift_max : float
        max of |xi - xi0 - 2 beta3 kappa0 t|

    exterior_slope_max : float
        max over samples of the gradient away from the shock

    holder_seminorm_max : float
        max over samples of the C^1/3 seminorm of w

    min_sigma : float
        global minimum of the sound speed
    """
    def __init__(self, status):
        super(BlowupReport, self).__init__()

        self.status = status
        self.T_star = None
        self.T_star_tracker = None
        self.rate_exponent = None
        self.rate_stderr = None
        self.xi_star = None
        self.drift_max = None
        self.exterior_slope_max = None
        self.holder_seminorm_max = None
        self.min_sigma = None


class TrajectoryPath(Result):
    """Result class for integrate_trajectory method.

    Attributes
    ----------
    s1, y0 : float
        start of the trajectory

    tag : str
        velocity-field tag

    s : numpy.ndarray
        strictly increasing sample times

    phi : numpy.ndarray
        positions at the sample times

    velocity : numpy.ndarray
        transport field at the samples

    status : str
        'ok' or 'escaped'
    """
    def __init__(self, s1, y0, tag=''):
        super(TrajectoryPath, self).__init__()

        self.s1 = float(s1)
        self.y0 = np.asarray(y0, dtype=float)
        self.tag = tag
        self.s = np.empty(0)
        self.phi = np.empty(0)
        self.velocity = np.empty(0)
        self.status = 'ok'
        self._dense = None

    def __call__(self, s):
        """Dense-output position at time(s) s."""
        return self._dense(s)

    @property
    def s_end(self):
        return float(self.s[-1])


class RunRecord(Result):
    """Result class for run_until_blowup method.

    Attributes
    ----------
    config : dict
        resolved configuration of the run

    samples : [] dict
        append-only time series, one dict per sample time

    status : str
        blew_up | max_time | vacuum | numerical_failure | pole_singularity

    stop_reason : str
        slope_cap | resolution | dt_floor | max_time | vacuum | numerical_failure | pole_singularity

    t_star : float
        extrapolated blow-up time, None when undefined

    counters : dict
        ambiguity warnings, ODE fallbacks, support excess events

    field_snapshots : [] EquivariantState
        states kept every output.snapshot_every samples

    selfsim_snapshots : [] (SelfSimField, ModulationState)
        rescaled fields kept every output.emit_selfsim samples
    """
    def __init__(self, config=None):
        super(RunRecord, self).__init__()

        self.config = config or {}
        self.samples = []
        self.status = None
        self.stop_reason = None
        self.t_star = None
        self.counters = {'ambiguous_extremum': 0, 'ode_fallback': 0, 'support_excess': 0, 'steps': 0}
        self.selfsim_snapshots = []
        self.field_snapshots = []

    def append(self, sample):
        sample = dict(sample)
        sample.setdefault('schema_version', SCHEMA_VERSION)
        self.samples.append(sample)

    def column(self, name):
        return np.array([np.nan if smp.get(name) is None else smp[name] for smp in self.samples], dtype=float)

    def __len__(self):
        return len(self.samples)

    def summary(self):
        return {'kind': 'summary', 'schema_version': SCHEMA_VERSION, 'status': self.status,
                'stop_reason': self.stop_reason, 't_star': self.t_star, 'n_samples': len(self.samples),
                'counters': dict(self.counters), 'checks': dict(self.checks)}

    def to_dict(self):
        dct = self.summary()
        dct['config'] = self.config
        dct['samples'] = self.samples
        return _to_plain(dct)


class SweepResult(Result):
    """Result class for sweep method.

    Attributes
    ----------
    rows : [] dict
        one summary row per launched run, sorted by config hash

    columns : [] str
        CSV column order
    """
    columns = ['config_hash', 'gamma', 'tau0', 'n_cells', 'xi0', 'flat_mode', 'status', 'stop_reason', 't_star',
               't_star_error', 'rate_exponent', 'drift_max', 'min_sigma', 'holder_seminorm_max',
               'bootstrap_min_margin', 'oracle_error', 'passed', 'error_code', 'error_message']

    def __init__(self):
        super(SweepResult, self).__init__()

        self.rows = []

    def add_row(self, row):
        self.rows.append(dict((c, row.get(c)) for c in self.columns))
        self.rows.sort(key=lambda r: r['config_hash'])

    @property
    def failed_rows(self):
        return [r for r in self.rows if r.get('error_code')]

    def column(self, name):
        return np.array([np.nan if r.get(name) is None else r[name] for r in self.rows], dtype=float)
