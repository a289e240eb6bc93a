"""
s2shock: harness.py

Implements the experiment classes tying the solver, the trackers and the
diagnostics into reproducible runs and parameter sweeps with their
artifacts on disk.

License: MIT
"""

import csv
import datetime
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from . import exceptions
from .config import ExperimentConfig, config_hash, dump_config, load_config
from .diagnostics import diagnose
from .equivariant import oracle_comparison, run_until_blowup
from .modulation import cross_validate
from .profile import w1d
from .result_models import RunRecord, SweepResult
from .riemann import betas as make_betas
from .selfsim import transport_speeds
from .utils import json_dumps, parse_run_record, parse_sweep_rows, read_jsonl, write_jsonl

__all__ = ['Experiment', 'Sweep', 'run_experiment', 'sweep', 'load_run', 'load_sweep', 'write_sweep_csv',
           'exit_code_for', 'EXIT_OK', 'EXIT_FAILED_CHECK', 'EXIT_USAGE', 'EXIT_IO', 'EXIT_ERROR']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_ERROR = 4


def exit_code_for(error):
    """CLI exit status of an exception raised by an experiment."""
    if isinstance(error, (exceptions.UsageError, exceptions.ConfigError)):
        return EXIT_USAGE
    if isinstance(error, exceptions.PersistenceError):
        return EXIT_IO
    return EXIT_ERROR


def _as_config(config):
    if isinstance(config, ExperimentConfig):
        return config
    if isinstance(config, dict):
        return ExperimentConfig.from_dict(config)
    return load_config(config)


def _makedirs(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise exceptions.PersistenceError(details='{}: {}'.format(path, e))


def _write_text(path, text):
    try:
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(text)
    except (IOError, OSError) as e:
        raise exceptions.PersistenceError(details='{}: {}'.format(path, e))


def _write_csv(path, header, columns):
    try:
        with open(path, 'w', encoding='utf-8', newline='') as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(zip(*[np.broadcast_to(c, np.shape(columns[1])).tolist() for c in columns]))
    except (IOError, OSError) as e:
        raise exceptions.PersistenceError(details='{}: {}'.format(path, e))


def _column_min(record, name):
    values = record.column(name)
    values = values[np.isfinite(values)]
    return float(values.min()) if values.size else None


class _ExperimentBase(object):
    """
    This is the base class for experiments.

    It provides common utilities for each experiment:
      1. config resolution
      2. run the numerical work with error logging
    """

    def __init__(self, config, out_dir=None):
        self.config = _as_config(config)
        self.out_dir = out_dir or self.config.output.dir

    def _do(self, func, *args, **kwargs):
        """
        Used to run one numerical operation, logging errors before they propagate.

        :param func: the operation to run
        :return: whatever `func` returns
        """
        try:
            return func(*args, **kwargs)
        except exceptions.S2ShockError as e:
            logger.error('%s failed: %s', getattr(func, '__name__', func), e)
            raise


class Experiment(_ExperimentBase):
    """
    One run: simulate, diagnose and write the run directory.

    Artifacts: run.jsonl, summary.json, metadata.json, config.yaml and the
    optional snapshots/ and selfsim/ CSV files.
    """

    def __init__(self, config, out_dir=None, seed=None):
        """
        Parameters
        ----------
        config : :class:`~s2shock.config.ExperimentConfig`, dict or path
            experiment configuration

        out_dir : str
            run directory, defaults to output.dir

        seed : int
            overrides the config seed
        """
        super(Experiment, self).__init__(config, out_dir)
        if seed is not None:
            dct = self.config.to_dict()
            dct['seed'] = seed
            self.config = ExperimentConfig.from_dict(dct)
        self.resolved = self.config.resolved()
        self.record = None
        self.report = None
        self.cross_validation = None

    def run(self):
        """
        Simulate, diagnose and persist.

        Returns
        -------
        :class:`~s2shock.result_models.BlowupReport`
        """
        self.record = self._do(run_until_blowup, self.resolved)
        self.report = self._do(diagnose, self.record)
        self.cross_validation = self._do(cross_validate, self.record)
        self._write()
        logger.info('run finished: status=%s passed=%s dir=%s', self.record.status, self.report.passed,
                    self.out_dir)
        return self.report

    def summary(self):
        """The content of summary.json; deterministic given config and seed."""
        record, report = self.record, self.report
        summary = record.summary()
        summary.update({
            'config_hash': config_hash(self.config),
            'T_star': report.T_star,
            'T_star_tracker': report.T_star_tracker,
            'rate_exponent': report.rate_exponent,
            'rate_stderr': report.rate_stderr,
            'xi_star': report.xi_star,
            'drift_max': report.drift_max,
            'exterior_slope_max': report.exterior_slope_max,
            'holder_seminorm_max': report.holder_seminorm_max,
            'min_sigma': report.min_sigma,
            'bootstrap_min_margin': _column_min(record, 'bootstrap_min_margin'),
            'profile_min_margin': _column_min(record, 'profile_min_margin'),
            'ib0_min_margin': record.samples[0].get('ib0_min_margin') if record.samples else None,
            'max_dev_kappa': self.cross_validation.max_dev_kappa,
            'max_dev_tau': self.cross_validation.max_dev_tau,
            'max_dev_xi': self.cross_validation.max_dev_xi,
            'checks': dict(report.checks),
            'modulation_checks': dict(self.cross_validation.checks),
            'passed': report.passed,
        })
        return summary

    def _write(self):
        out = self.out_dir
        _makedirs(out)
        summary_line = dict(self.record.summary(), config=self.resolved.to_dict())
        write_jsonl(os.path.join(out, 'run.jsonl'), self.record.samples + [summary_line])
        _write_text(os.path.join(out, 'summary.json'), json_dumps(self.summary(), sort_keys=True, indent=2))
        metadata = {'created': datetime.datetime.now().isoformat(), 'version': __version__,
                    'config_hash': config_hash(self.config)}
        _write_text(os.path.join(out, 'metadata.json'), json_dumps(metadata, sort_keys=True, indent=2))
        dump_config(self.config, os.path.join(out, 'config.yaml'))

        if self.record.field_snapshots:
            _makedirs(os.path.join(out, 'snapshots'))
        for i, state in enumerate(self.record.field_snapshots):
            _write_csv(os.path.join(out, 'snapshots', 'field_{:04d}.csv'.format(i)),
                       ['theta_tilde', 'w', 'z', 'sigma', 'v'],
                       [state.grid, state.w, state.z, state.sigma, state.velocity])

        if self.record.selfsim_snapshots:
            _makedirs(os.path.join(out, 'selfsim'))
        b = make_betas(self.resolved.solver.gamma)
        for i, (field, modulation) in enumerate(self.record.selfsim_snapshots):
            Wbar = w1d(field.y)
            g_W, g_Z = transport_speeds(field, modulation, b)
            _write_csv(os.path.join(out, 'selfsim', 'selfsim_{:04d}.csv'.format(i)),
                       ['s', 'y', 'W', 'Z', 'Wbar', 'W_minus_Wbar', 'g_W', 'g_Z'],
                       [field.s, field.y, field.W, field.Z, Wbar, field.W - Wbar, g_W, g_Z])

    def sweep_row(self):
        solver = self.resolved.solver
        report = self.report
        row = {
            'config_hash': config_hash(self.config),
            'gamma': solver.gamma, 'tau0': solver.tau0, 'n_cells': solver.n_cells, 'xi0': solver.xi0,
            'flat_mode': solver.flat_mode,
            'status': self.record.status, 'stop_reason': self.record.stop_reason,
            't_star': report.T_star,
            't_star_error': None if report.T_star is None else abs(report.T_star - solver.tau0),
            'rate_exponent': report.rate_exponent, 'drift_max': report.drift_max,
            'min_sigma': report.min_sigma, 'holder_seminorm_max': report.holder_seminorm_max,
            'bootstrap_min_margin': self.summary()['bootstrap_min_margin'],
            'passed': report.passed,
        }
        if solver.flat_mode and make_betas(solver.gamma).beta2 == 0.0:
            row['oracle_error'], _ = self._do(oracle_comparison, solver)
        return row


def _error_row(config, digest, code, message):
    solver = config.solver
    return {'config_hash': digest, 'gamma': solver.gamma, 'tau0': solver.tau0, 'n_cells': solver.n_cells,
            'xi0': solver.xi0, 'flat_mode': solver.flat_mode, 'passed': False, 'error_code': code,
            'error_message': message}


def _sweep_worker(config_dict, out_dir):
    """Run one sweep point; every failure becomes an error row so the other points survive."""
    config = ExperimentConfig.from_dict(config_dict)
    digest = config_hash(config)
    try:
        experiment = Experiment(config, os.path.join(out_dir, digest[:12]))
        experiment.run()
        return experiment.sweep_row()
    except exceptions.S2ShockError as e:
        return _error_row(config, digest, e.code, e.message)
    except (IOError, OSError) as e:
        logger.error('sweep point %s failed: %s', digest[:12], e)
        return _error_row(config, digest, exceptions.PersistenceError.code, str(e))
    except Exception as e:
        logger.exception('sweep point %s failed', digest[:12])
        return _error_row(config, digest, exceptions.NumericalFailureError.code,
                          '{}: {}'.format(type(e).__name__, e))


class Sweep(_ExperimentBase):
    """The cross product of the sweep block, one Experiment per point, written to sweep.csv."""

    def __init__(self, config, out_dir=None, workers=None):
        super(Sweep, self).__init__(config, out_dir)
        self.workers = workers or self.config.sweep.workers

    def run(self):
        """
        Returns
        -------
        :class:`~s2shock.result_models.SweepResult`
        """
        configs = self.config.expand_sweep()
        logger.info('sweep of %d runs with %d workers', len(configs), self.workers)
        _makedirs(self.out_dir)
        dicts = [c.to_dict() for c in configs]
        result = SweepResult()
        if self.workers > 1 and len(configs) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(_sweep_worker, dicts, [self.out_dir] * len(dicts)))
        else:
            rows = [_sweep_worker(d, self.out_dir) for d in dicts]
        for row in rows:
            result.add_row(row)
            logger.info('sweep point %s: %s', row['config_hash'][:12], row.get('status') or row.get('error_code'))
        write_sweep_csv(result, os.path.join(self.out_dir, 'sweep.csv'))
        return result


def _parse_result(data, parse_func, klass):
    """
    Used to fill a result object from persisted data.

    :param data: decoded file content
    :param parse_func: helper function from utils.parse_utils module
    :param klass: the result class to instantiate
    :return: an instance of klass
    """
    result = klass()
    parse_func(result, data)
    return result


def write_sweep_csv(result, path):
    try:
        with open(path, 'w', encoding='utf-8', newline='') as fh:
            writer = csv.DictWriter(fh, fieldnames=result.columns)
            writer.writeheader()
            for row in result.rows:
                writer.writerow({k: ('' if v is None or (isinstance(v, float) and math.isnan(v)) else v)
                                 for k, v in row.items()})
    except (IOError, OSError) as e:
        raise exceptions.PersistenceError(details='{}: {}'.format(path, e))


def run_experiment(config, out_dir=None, seed=None):
    """
    Run one experiment and write its artifacts.

    Parameters
    ----------
    config : str, dict or :class:`~s2shock.config.ExperimentConfig`
        config path or document

    Returns
    -------
    int
        0 when every diagnostic passed, 1 otherwise
    """
    report = Experiment(config, out_dir, seed).run()
    return EXIT_OK if report.passed else EXIT_FAILED_CHECK


def sweep(config, out_dir=None, workers=None):
    """Run the sweep block of a config; returns the SweepResult."""
    return Sweep(config, out_dir, workers).run()


def load_run(path):
    """
    Rebuild a RunRecord from run.jsonl (or the run directory holding it).

    Returns
    -------
    :class:`~s2shock.result_models.RunRecord`
    """
    if os.path.isdir(path):
        path = os.path.join(path, 'run.jsonl')
    lines = read_jsonl(path)
    if not lines or lines[-1].get('kind') != 'summary':
        raise exceptions.PersistenceError('Run file has no summary line', details=str(path))
    return _parse_result(lines, parse_run_record, RunRecord)


def load_sweep(path):
    """
    Rebuild a SweepResult from sweep.csv (or the sweep directory holding it).

    Returns
    -------
    :class:`~s2shock.result_models.SweepResult`
    """
    if os.path.isdir(path):
        path = os.path.join(path, 'sweep.csv')
    try:
        with open(path, 'r', encoding='utf-8', newline='') as fh:
            rows = list(csv.DictReader(fh))
    except (IOError, OSError) as e:
        raise exceptions.PersistenceError(details='{}: {}'.format(path, e))
    return _parse_result(rows, parse_sweep_rows, SweepResult)
