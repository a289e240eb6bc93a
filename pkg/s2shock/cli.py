"""
s2shock: cli.py

Command line entry point: simulate, sweep, diagnose, profile table,
check-geometry and trajectories.

License: MIT
"""

import argparse
import csv
import glob
import logging
import os
import sys

import numpy as np

from . import exceptions
from .config import ExperimentConfig, dump_config, load_config
from .diagnostics import diagnose
from .geometry import origin_derivative_table, skew_from_components
from .harness import EXIT_FAILED_CHECK, EXIT_OK, Experiment, Sweep, exit_code_for, load_run
from .profile import profile_table
from .trajectories import FrozenTransport, growth_certificate, integrate_trajectory, weighted_integral
from .utils import json_dumps

__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'
WEIGHT_EXPONENTS = (0.5, 1.0, 2.0)


def _configure_logging(level):
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    logging.captureWarnings(True)


def build_parser():
    parser = argparse.ArgumentParser(prog='s2shock',
                                     description='Shock formation lab for equivariant Euler on the sphere')
    parser.add_argument('--config', help='YAML experiment configuration')
    parser.add_argument('--out', help='output directory, overrides output.dir')
    parser.add_argument('--seed', type=int, help='overrides the config seed')
    parser.add_argument('--print-defaults', action='store_true', help='print the resolved configuration and exit')
    parser.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('--workers', type=int, help='sweep worker processes, overrides sweep.workers')
    commands = parser.add_subparsers(dest='command')

    simulate = commands.add_parser('simulate', help='run one experiment')
    simulate.add_argument('--emit-selfsim', type=int, metavar='EVERY', help='self-similar CSV every EVERY samples')
    simulate.add_argument('--snapshot-every', type=int, metavar='EVERY', help='field CSV every EVERY samples')

    commands.add_parser('sweep', help='run the sweep block of the configuration')

    diag = commands.add_parser('diagnose', help='report on a persisted run; exits 1 on any failed check')
    diag.add_argument('run', help='run.jsonl or the run directory')

    profile = commands.add_parser('profile', help='blow-up profile utilities')
    profile_commands = profile.add_subparsers(dest='profile_command')
    table = profile_commands.add_parser('table', help='CSV table of the 2D profile')
    table.add_argument('--y1min', type=float, default=-10.0)
    table.add_argument('--y1max', type=float, default=10.0)
    table.add_argument('--y2min', type=float, default=-2.0)
    table.add_argument('--y2max', type=float, default=2.0)
    table.add_argument('--n', type=int, default=21)

    geometry = commands.add_parser('check-geometry', help='origin derivative table of the shock-adapted frame')
    geometry.add_argument('--psi', type=float, default=0.0)
    geometry.add_argument('--q12', type=float, default=0.0)
    geometry.add_argument('--q13', type=float, default=0.0)
    geometry.add_argument('--q23', type=float, default=0.0)
    geometry.add_argument('--r0', type=float, help='sphere radius, defaults to geometry.r0')

    traj = commands.add_parser('trajectories', help='Lagrangian paths through the self-similar snapshots of a run')
    traj.add_argument('--from-run', required=True, help='run directory written with --emit-selfsim')
    traj.add_argument('--seeds', required=True, help='text file with one starting point y0 per line')
    traj.add_argument('--field', choices=['W', 'Z'], default='W')
    return parser


def _experiment_config(args):
    config = load_config(args.config) if args.config else ExperimentConfig()
    dct = config.to_dict()
    if args.seed is not None:
        dct['seed'] = args.seed
    if args.workers is not None:
        dct['sweep']['workers'] = args.workers
    if args.out:
        dct['output']['dir'] = args.out
    if getattr(args, 'emit_selfsim', None) is not None:
        dct['output']['emit_selfsim'] = args.emit_selfsim
    if getattr(args, 'snapshot_every', None) is not None:
        dct['output']['snapshot_every'] = args.snapshot_every
    return ExperimentConfig.from_dict(dct)


def _write_rows(header, rows):
    writer = csv.writer(sys.stdout)
    writer.writerow(header)
    writer.writerows(rows)


def _simulate(args):
    report = Experiment(_experiment_config(args)).run()
    return EXIT_OK if report.passed else EXIT_FAILED_CHECK


def _sweep(args):
    result = Sweep(_experiment_config(args)).run()
    for row in result.failed_rows:
        logger.warning('sweep point %s failed: %s', row['config_hash'][:12], row['error_code'])
    return EXIT_OK


def _diagnose(args):
    report = diagnose(load_run(args.run))
    print(json_dumps(report.to_dict(), sort_keys=True, indent=2))
    return EXIT_OK if report.passed else EXIT_FAILED_CHECK


def _profile(args):
    if args.profile_command != 'table':
        raise exceptions.UsageError(details='profile needs a subcommand: table')
    rows = profile_table(args.y1min, args.y1max, args.y2min, args.y2max, args.n)
    _write_rows(['y1', 'y2', 'W', 'dW1', 'dW2', 'residual'], rows.tolist())
    return EXIT_OK


def _check_geometry(args):
    r0 = args.r0 if args.r0 is not None else _experiment_config(args).geometry.r0
    table = origin_derivative_table(args.psi, skew_from_components(args.q12, args.q13, args.q23), r0,
                                    raise_on_mismatch=False)
    _write_rows(['name', 'order', 'analytic', 'numeric', 'error', 'ok'],
                [[e['name'], ''.join(str(i) for i in e['order']), repr(e['analytic']), repr(e['numeric']),
                  '{:.3e}'.format(e['error']), e['ok']] for e in table.entries])
    print('PASS' if table.passed else 'FAIL: {}'.format(', '.join(table.failed_checks)))
    return EXIT_OK if table.passed else EXIT_FAILED_CHECK


def _trajectories(args):
    paths = sorted(glob.glob(os.path.join(args.from_run, 'selfsim', 'selfsim_*.csv')))
    if len(paths) < 2:
        raise exceptions.UsageError('Need at least two self-similar snapshots',
                                    details='{} found under {}'.format(len(paths), args.from_run))
    transport = FrozenTransport.from_csv(paths, args.field)
    try:
        seeds = np.atleast_1d(np.loadtxt(args.seeds, dtype=float))
    except (IOError, OSError, ValueError) as e:
        raise exceptions.UsageError('Unreadable seed file', details='{}: {}'.format(args.seeds, e))

    rows = []
    for index, y0 in enumerate(seeds):
        path = integrate_trajectory(transport, transport.s[0], float(y0), transport.s[-1], tag=args.field)
        logger.info('seed %d y0=%g: %s, growth margin %.3e', index, y0, path.status,
                    growth_certificate(path, 1.0 / 3.0))
        for s, phi in zip(path.s, path.phi):
            rows.append([index, y0, s, phi] + [weighted_integral(path, p, s) for p in WEIGHT_EXPONENTS])
    _write_rows(['seed', 'y0', 's', 'phi'] + ['weighted_p{:g}'.format(p) for p in WEIGHT_EXPONENTS], rows)
    return EXIT_OK


_COMMANDS = {
    'simulate': _simulate,
    'sweep': _sweep,
    'diagnose': _diagnose,
    'profile': _profile,
    'check-geometry': _check_geometry,
    'trajectories': _trajectories,
}


def main(argv=None):
    """
    Parse the command line and run one subcommand.

    Returns
    -------
    int
        exit status: 0 success, 1 failed check, 2 usage or config error, 3 I/O error, 4 other errors
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(getattr(logging, args.log_level))
    try:
        if args.print_defaults:
            sys.stdout.write(dump_config(_experiment_config(args)))
            return EXIT_OK
        if args.command is None:
            parser.print_usage(sys.stderr)
            return exit_code_for(exceptions.UsageError())
        return _COMMANDS[args.command](args)
    except exceptions.S2ShockError as e:
        logger.error('%s', e)
        return exit_code_for(e)
