"""
s2shock: diagnostics.py

Post-processing of run records: blow-up time and rate, shock location
drift, Hoelder regularity and vacuum absence, aggregated into a
BlowupReport with pass flags.

License: MIT
"""

import logging
import math

import numpy as np
from scipy import stats

from .exceptions import ContractViolation, DiagnosticUndefinedError
from .result_models import BlowupReport

__all__ = ['blowup_time', 'rate_fit', 'holder_seminorm', 'holder_seminorm_dense', 'location_report',
           'vacuum_check', 'diagnose', 'scaling_exponent', 'MIN_FIT_SAMPLES', 'TAIL_EXCLUSION', 'FIT_MAX_DY',
           'ABORTED_STATUSES']

logger = logging.getLogger(__name__)

MIN_FIT_SAMPLES = 10
TAIL_EXCLUSION = 0.02
FIT_MAX_DY = 0.05
# run statuses that end before any blow-up criterion could fire
ABORTED_STATUSES = ('numerical_failure', 'pole_singularity')


def _growth_window(t, slope, require_decade):
    """Indices of the trailing samples whose slope lies within a decade of the last one."""
    ok = np.isfinite(t) & np.isfinite(slope) & (slope > 0.0)
    idx = np.flatnonzero(ok)
    if idx.size < 3:
        raise DiagnosticUndefinedError(details='{} usable samples'.format(idx.size))
    final = slope[idx[-1]]
    below = np.flatnonzero(slope[idx] < final / 10.0)
    if below.size:
        return idx[below[-1] + 1:]
    if require_decade:
        raise DiagnosticUndefinedError('less than one decade of slope growth',
                                       details='growth factor {:.3g}'.format(final / slope[idx].min()))
    return idx


def blowup_time(record, max_dy=None):
    """
    Extrapolated blow-up time.

    1 / max slope is fitted linearly against t over the final decade of
    resolved growth (all resolved samples when less was recorded) and
    continued to zero. A sample is resolved when its self-similar spacing
    'dy' is at most `max_dy`; samples without 'dy' count as resolved.

    Parameters
    ----------
    record : :class:`~s2shock.result_models.RunRecord`

    max_dy : float
        defaults to diagnostics.fit_max_dy of the record config

    Returns
    -------
    float
    """
    if max_dy is None:
        max_dy = record.config.get('diagnostics', {}).get('fit_max_dy', FIT_MAX_DY)
    t, slope = record.column('t'), record.column('max_slope')
    slope = np.where(record.column('dy') > max_dy, np.nan, slope)
    window = _growth_window(t, slope, require_decade=False)
    if window.size < 3:
        raise DiagnosticUndefinedError(details='{} samples in the growth window'.format(window.size))
    fit = stats.linregress(t[window], 1.0 / slope[window])
    if not fit.slope < 0.0:
        raise DiagnosticUndefinedError('slope is not growing', details='d(1/slope)/dt={:.3g}'.format(fit.slope))
    return float(-fit.intercept / fit.slope)


def rate_fit(record, T_star=None):
    """
    Exponent of max slope against T* - t.

    Uses the last decade of growth without the final 2% of that window.

    Returns
    -------
    (float, float)
        exponent (expected -1) and its standard error
    """
    t, slope = record.column('t'), record.column('max_slope')
    if T_star is None:
        T_star = blowup_time(record)
    window = _growth_window(t, slope, require_decade=True)
    t0, t1 = t[window[0]], t[window[-1]]
    window = window[t[window] <= t1 - TAIL_EXCLUSION * (t1 - t0)]
    window = window[T_star - t[window] > 0.0]
    if window.size < MIN_FIT_SAMPLES:
        raise DiagnosticUndefinedError(details='{} samples in the fit window, need {}'.format(window.size,
                                                                                            MIN_FIT_SAMPLES))
    fit = stats.linregress(np.log(T_star - t[window]), np.log(slope[window]))
    return float(fit.slope), float(fit.stderr)


def _check_pairs(x, f):
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.size < 3 or x.shape != f.shape:
        raise ContractViolation('at least 3 samples of matching shape are required',
                                details='x{} f{}'.format(x.shape, f.shape))
    return x, f


def holder_seminorm(x, f, exponent=1.0 / 3.0):
    """
    Hoelder seminorm estimated on adjacent and dyadic-separation pairs.

    Parameters
    ----------
    x : numpy.ndarray
        increasing sample points

    f : numpy.ndarray
        samples

    exponent : float

    Returns
    -------
    float
    """
    x, f = _check_pairs(x, f)
    best = 0.0
    gap = 1
    while gap < x.size:
        ratio = np.abs(f[gap:] - f[:-gap]) / np.abs(x[gap:] - x[:-gap]) ** exponent
        best = max(best, float(ratio.max()))
        gap *= 2
    # the full-span pair
    best = max(best, abs(f[-1] - f[0]) / abs(x[-1] - x[0]) ** exponent)
    return best


def holder_seminorm_dense(x, f, exponent=1.0 / 3.0):
    """All-pairs Hoelder seminorm, quadratic cost."""
    x, f = _check_pairs(x, f)
    dx = np.abs(np.subtract.outer(x, x))
    df = np.abs(np.subtract.outer(f, f))
    off = dx > 0.0
    return float(np.max(df[off] / dx[off] ** exponent))


def _betas3(gamma):
    return (gamma - 1.0) / (gamma + 1.0)


def location_report(record, config=None):
    """
    Drift of the shock location and the gradient away from it.

    Returns
    -------
    dict
        drift_max, drift_bound (M^7/4 tau0^2), drift_ok, xi_star,
        exterior_slope_max, exterior_bound (M + 2 delta^-2/3), exterior_ok
    """
    config = config or record.config
    solver, diag = config['solver'], config['diagnostics']
    M, tau0 = diag['M'], solver['tau0']
    t, xi = record.column('t'), record.column('xi')
    drift = np.abs(xi - solver['xi0'] - 2.0 * _betas3(solver['gamma']) * solver['sigma_inf'] * t)
    drift = drift[np.isfinite(drift)]
    exterior = record.column('exterior_slope')
    exterior = exterior[np.isfinite(exterior)]

    out = {'drift_max': float(drift.max()) if drift.size else 0.0,
           'drift_bound': M ** 1.75 * tau0 ** 2,
           'xi_star': float(xi[-1]) if xi.size else None,
           'exterior_slope_max': float(exterior.max()) if exterior.size else 0.0,
           'exterior_bound': M + 2.0 * diag['delta'] ** (-2.0 / 3.0)}
    out['drift_ok'] = out['drift_max'] <= out['drift_bound']
    out['exterior_ok'] = out['exterior_slope_max'] <= out['exterior_bound']
    return out


def vacuum_check(record, sigma_inf=None):
    """
    Global minimum of the sound speed over the run.

    Returns
    -------
    (float, bool)
        min sigma and whether it stays at or above sigma_inf / 2
    """
    if sigma_inf is None:
        sigma_inf = record.config['solver']['sigma_inf']
    values = record.column('min_sigma')
    values = values[np.isfinite(values)]
    min_sigma = float(values.min()) if values.size else float('nan')
    return min_sigma, bool(min_sigma >= 0.5 * sigma_inf)


def diagnose(record, config=None):
    """
    Aggregate every run-level check into a report.

    T* and the rate are evaluated for runs that blew up; the blow-up time
    window is |T* - tau0| <= 2 M tau0^2. Runs ending in numerical_failure or
    pole_singularity fail the 'completed' check.

    Parameters
    ----------
    record : :class:`~s2shock.result_models.RunRecord`

    config : dict
        resolved configuration, defaults to the one stored in the record

    Returns
    -------
    :class:`~s2shock.result_models.BlowupReport`
    """
    config = config or record.config
    solver, diag = config['solver'], config['diagnostics']
    M, tau0 = diag['M'], solver['tau0']
    report = BlowupReport(record.status)
    if record.status in ABORTED_STATUSES:
        report.add_check('completed', 0.0, 1.0, False)

    tau = record.column('tau')
    tau = tau[np.isfinite(tau)]
    report.T_star_tracker = float(tau[-1]) if tau.size else None

    if record.status == 'blew_up':
        try:
            report.T_star = blowup_time(record)
            report.add_check('blowup_time', abs(report.T_star - tau0), 2.0 * M * tau0 ** 2,
                             abs(report.T_star - tau0) <= 2.0 * M * tau0 ** 2)
            report.rate_exponent, report.rate_stderr = rate_fit(record, report.T_star)
            deviation = abs(report.rate_exponent + 1.0)
            report.add_check('rate', deviation, diag['rate_tolerance'], deviation <= diag['rate_tolerance'])
        except DiagnosticUndefinedError as e:
            logger.warning('blow-up diagnostics undefined: %s', e)
            if report.T_star is None:
                report.add_check('blowup_time', math.nan, 2.0 * M * tau0 ** 2, False)
            report.add_check('rate', math.nan, diag['rate_tolerance'], False)

    location = location_report(record, config)
    report.xi_star = location['xi_star']
    report.drift_max = location['drift_max']
    report.exterior_slope_max = location['exterior_slope_max']
    report.add_check('drift', location['drift_max'], location['drift_bound'], location['drift_ok'])
    report.add_check('exterior_slope', location['exterior_slope_max'], location['exterior_bound'],
                     location['exterior_ok'])

    holder = record.column('holder')
    holder = holder[np.isfinite(holder)]
    report.holder_seminorm_max = float(holder.max()) if holder.size else 0.0
    report.add_check('holder', report.holder_seminorm_max, diag['holder_bound'],
                     report.holder_seminorm_max <= diag['holder_bound'])

    report.min_sigma, ok = vacuum_check(record, solver['sigma_inf'])
    report.add_check('vacuum', report.min_sigma, 0.5 * solver['sigma_inf'], ok)

    for name in report.failed_checks:
        logger.warning('diagnostic %s failed: %s', name, report.checks[name])
    return report


def scaling_exponent(x, y):
    """
    Log-log least-squares slope of y against x.

    Returns
    -------
    (float, float)
        slope and its standard error
    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    ok = np.isfinite(x) & np.isfinite(y) & (x > 0.0) & (y > 0.0)
    if np.count_nonzero(ok) < 2:
        raise DiagnosticUndefinedError(details='{} positive pairs'.format(np.count_nonzero(ok)))
    fit = stats.linregress(np.log(x[ok]), np.log(y[ok]))
    return float(fit.slope), float(fit.stderr)
