import json
import os
import tempfile
import unittest
from unittest import mock

from s2shock import ExperimentConfig, exceptions
from s2shock.harness import (EXIT_ERROR, EXIT_IO, EXIT_OK, EXIT_USAGE, Experiment, Sweep, exit_code_for, load_run,
                             load_sweep, run_experiment)
from s2shock.utils import exception_from_row, write_jsonl
from .sample import pole_solver, steady_config, steady_solver


class HarnessTestCase(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def test_experiment_artifacts(self):
        out = os.path.join(self.tmp, 'run')
        config = steady_config.to_dict()
        config['output'] = {'snapshot_every': 5}
        experiment = Experiment(config, out)
        report = experiment.run()

        self.assertTrue(report.passed, report.failed_checks)
        self.assertEqual(report.status, 'max_time')
        for name in ('run.jsonl', 'summary.json', 'metadata.json', 'config.yaml'):
            self.assertTrue(os.path.isfile(os.path.join(out, name)), name)
        self.assertTrue(os.listdir(os.path.join(out, 'snapshots')))
        self.assertFalse(os.path.exists(os.path.join(out, 'selfsim')))

        with open(os.path.join(out, 'summary.json')) as fh:
            summary = json.load(fh)
        self.assertEqual(summary['status'], 'max_time')
        self.assertTrue(summary['passed'])
        self.assertIsNone(summary['T_star'])
        self.assertIsNone(summary['bootstrap_min_margin'])
        self.assertIsNone(summary['profile_min_margin'])
        self.assertEqual(summary['n_samples'], len(experiment.record))

    def test_summary_is_deterministic(self):
        texts = []
        for name in ('a', 'b'):
            out = os.path.join(self.tmp, name)
            Experiment(steady_config, out).run()
            with open(os.path.join(out, 'summary.json')) as fh:
                texts.append(fh.read())
        self.assertEqual(texts[0], texts[1])

    def test_load_run(self):
        out = os.path.join(self.tmp, 'run')
        experiment = Experiment(steady_config, out)
        experiment.run()

        for path in (out, os.path.join(out, 'run.jsonl')):
            record = load_run(path)
            self.assertEqual(record.status, 'max_time')
            self.assertEqual(record.stop_reason, 'max_time')
            self.assertEqual(len(record), len(experiment.record))
            self.assertEqual(record.config['solver']['n_cells'], steady_solver.n_cells)
            self.assertEqual(record.samples[-1]['t'], experiment.record.samples[-1]['t'])

    def test_load_run_without_summary(self):
        path = os.path.join(self.tmp, 'run.jsonl')
        write_jsonl(path, [{'t': 0.0, 'max_slope': 1.0}])

        def should_raise():
            load_run(path)

        self.assertRaises(exceptions.PersistenceError, should_raise)

        def should_raise_missing():
            load_run(os.path.join(self.tmp, 'missing.jsonl'))

        self.assertRaises(exceptions.PersistenceError, should_raise_missing)

    def test_run_experiment(self):
        self.assertEqual(run_experiment(steady_config, os.path.join(self.tmp, 'run')), EXIT_OK)

    def test_seed_override(self):
        experiment = Experiment(steady_config, self.tmp, seed=7)
        self.assertEqual(experiment.config.seed, 7)
        self.assertEqual(experiment.resolved.seed, 7)

    def test_sweep(self):
        config = ExperimentConfig(solver=steady_solver.to_dict(), sweep={'n_cells': [64, 96]})
        result = Sweep(config, self.tmp).run()

        self.assertEqual(len(result.rows), 2)
        self.assertEqual(result.failed_rows, [])
        self.assertEqual(sorted(r['n_cells'] for r in result.rows), [64, 96])
        self.assertTrue(all(r['passed'] for r in result.rows))
        self.assertTrue(os.path.isfile(os.path.join(self.tmp, 'sweep.csv')))

        loaded = load_sweep(self.tmp)
        self.assertEqual([r['config_hash'] for r in loaded.rows], [r['config_hash'] for r in result.rows])
        self.assertEqual(sorted(r['n_cells'] for r in loaded.rows), [64, 96])
        self.assertTrue(all(r['passed'] is True for r in loaded.rows))
        self.assertIsNone(loaded.rows[0]['error_code'])

    def test_sweep_pole_row(self):
        config = ExperimentConfig(solver=pole_solver.to_dict())
        result = Sweep(config, self.tmp).run()

        self.assertEqual(result.failed_rows, [])
        row = result.rows[0]
        self.assertEqual(row['status'], 'pole_singularity')
        self.assertEqual(row['stop_reason'], 'pole_singularity')
        self.assertFalse(row['passed'])
        self.assertIsNone(row['error_code'])

        loaded = load_sweep(os.path.join(self.tmp, 'sweep.csv'))
        self.assertEqual(loaded.rows[0]['status'], 'pole_singularity')
        self.assertIsNone(exception_from_row({'error_code': None}))

    def test_sweep_error_rows(self):
        original = Experiment.run

        def failing_run(experiment):
            if experiment.resolved.solver.n_cells == 96:
                raise exceptions.MarginError(details='forced')
            return original(experiment)

        config = ExperimentConfig(solver=steady_solver.to_dict(), sweep={'n_cells': [64, 96]})
        with mock.patch.object(Experiment, 'run', failing_run):
            result = Sweep(config, self.tmp).run()

        self.assertEqual(len(result.failed_rows), 1)
        row = result.failed_rows[0]
        self.assertEqual(row['n_cells'], 96)
        self.assertEqual(row['error_code'], 'margin')
        self.assertFalse(row['passed'])
        self.assertIsInstance(exception_from_row(row), exceptions.MarginError)

        loaded = load_sweep(os.path.join(self.tmp, 'sweep.csv'))
        self.assertEqual(sorted(r['error_code'] or '' for r in loaded.rows), ['', 'margin'])

    def test_sweep_survives_unexpected_errors(self):
        original = Experiment.run

        def crashing_run(experiment):
            if experiment.resolved.solver.n_cells == 96:
                raise RuntimeError('solver crashed')
            return original(experiment)

        config = ExperimentConfig(solver=steady_solver.to_dict(), sweep={'n_cells': [64, 96]})
        with mock.patch.object(Experiment, 'run', crashing_run):
            result = Sweep(config, self.tmp).run()

        self.assertEqual(len(result.rows), 2)
        failed, = result.failed_rows
        self.assertEqual(failed['n_cells'], 96)
        self.assertEqual(failed['error_code'], 'numerical-failure')
        self.assertIn('RuntimeError', failed['error_message'])
        passed, = [r for r in result.rows if not r['error_code']]
        self.assertEqual(passed['n_cells'], 64)
        self.assertTrue(passed['passed'])
        self.assertIsInstance(exception_from_row(failed), exceptions.NumericalFailureError)
        self.assertTrue(os.path.isfile(os.path.join(self.tmp, 'sweep.csv')))

    def test_exit_codes(self):
        self.assertEqual(exit_code_for(exceptions.UsageError()), EXIT_USAGE)
        self.assertEqual(exit_code_for(exceptions.ConfigError()), EXIT_USAGE)
        self.assertEqual(exit_code_for(exceptions.PersistenceError()), EXIT_IO)
        self.assertEqual(exit_code_for(exceptions.PoleSingularityError()), EXIT_ERROR)
