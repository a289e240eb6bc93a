import math
import os
import tempfile
import unittest

from s2shock import (DiagnosticsConfig, ExperimentConfig, SolverConfig, config_hash, dump_config, exceptions,
                     load_config)
from .sample import steady_config


class ConfigTestCase(unittest.TestCase):

    def test_resolved_defaults(self):
        config = ExperimentConfig().resolved()
        solver = config.solver

        self.assertAlmostEqual(solver.blowup_slope_cap, 1e6)
        self.assertAlmostEqual(solver.t_max, 0.02)
        self.assertAlmostEqual(solver.frame_speed, 2.0 * solver.beta3 * solver.sigma_inf)
        self.assertAlmostEqual(solver.smooth_width, math.pi / 320.0)
        self.assertAlmostEqual(config.diagnostics.l, math.log(100.0) ** -5)
        self.assertAlmostEqual(config.diagnostics.L, 0.01 ** -0.1)
        self.assertIsNone(ExperimentConfig().solver.t_max)

    def test_flat_mode_frame_speed(self):
        self.assertEqual(SolverConfig(flat_mode=True).resolved().frame_speed, 0.0)

    def test_initial_dy_sets_cells(self):
        self.assertEqual(SolverConfig().resolved().n_cells, 8192)

        spacing = {}
        for tau0 in (1e-2, 5e-3, 2.5e-3):
            solver = SolverConfig(tau0=tau0, initial_dy=0.0114).resolved()
            lo, hi = solver.window()
            dx = (hi - lo) / (solver.n_cells - 1)
            spacing[tau0] = dx * tau0 ** -1.5
            self.assertLessEqual(spacing[tau0], 0.0114)
            self.assertGreater(spacing[tau0], 0.0114 * 0.99)
            self.assertEqual(solver.resolved().n_cells, solver.n_cells)
        self.assertGreater(SolverConfig(tau0=2.5e-3, initial_dy=0.0114).resolved().n_cells,
                           SolverConfig(tau0=5e-3, initial_dy=0.0114).resolved().n_cells * 2)

        def should_raise():
            SolverConfig(initial_dy=-1.0)

        self.assertRaises(exceptions.ConfigError, should_raise)

    def test_fit_max_dy(self):
        self.assertEqual(DiagnosticsConfig().resolved(1e-2).fit_max_dy, 0.05)

        def should_raise():
            DiagnosticsConfig(fit_max_dy=0.0)

        self.assertRaises(exceptions.ConfigError, should_raise)

    def test_diagnostics_keep_explicit_values(self):
        diag = DiagnosticsConfig(l=0.01, L=3.0).resolved(1e-2)
        self.assertEqual(diag.l, 0.01)
        self.assertEqual(diag.L, 3.0)

    def test_unknown_key(self):
        def should_raise():
            ExperimentConfig(solver={'gama': 1.4})

        self.assertRaises(exceptions.ConfigError, should_raise)

        def should_raise_block():
            ExperimentConfig.from_dict({'solvers': {}})

        self.assertRaises(exceptions.ConfigError, should_raise_block)

    def test_invalid_values(self):
        for bad in ({'gamma': 1.0}, {'gamma': True}, {'n_cells': 16}, {'tau0': 2.0}, {'cfl': 0.0},
                    {'initial_data': 'noise'}, {'xi0': 1.0}, {'sigma_inf': 1.0}):
            def should_raise():
                SolverConfig(**bad)

            self.assertRaises(exceptions.ConfigError, should_raise)

    def test_regime_can_be_disabled(self):
        solver = SolverConfig(xi0=0.5, sigma_inf=1.0, enforce_regime=False)
        self.assertEqual(solver.xi0, 0.5)

    def test_geometry_radius(self):
        def should_raise():
            ExperimentConfig(geometry={'r0': 0.001})

        self.assertRaises(exceptions.ConfigError, should_raise)

    def test_yaml(self):
        config = load_config(text='solver:\n  gamma: 3.0\n  flat_mode: true\nseed: 7\n')
        self.assertEqual(config.solver.gamma, 3.0)
        self.assertTrue(config.solver.flat_mode)
        self.assertEqual(config.seed, 7)
        self.assertEqual(load_config(text=''), ExperimentConfig())

        text = dump_config(config)
        self.assertEqual(load_config(text=text), config.resolved())

    def test_yaml_errors(self):
        def should_raise_usage():
            load_config(text='solver: [1, 2')

        self.assertRaises(exceptions.UsageError, should_raise_usage)

        def should_raise_io():
            load_config(os.path.join(tempfile.gettempdir(), 'no-such-dir', 'config.yaml'))

        self.assertRaises(exceptions.PersistenceError, should_raise_io)

        def should_raise_root():
            load_config(text='- 1\n- 2\n')

        self.assertRaises(exceptions.ConfigError, should_raise_root)

    def test_dump_to_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'config.yaml')
            dump_config(steady_config, path)
            self.assertEqual(load_config(path), steady_config.resolved())

    def test_hash(self):
        self.assertEqual(config_hash(steady_config), config_hash(steady_config.resolved()))
        self.assertEqual(config_hash(ExperimentConfig()), config_hash(ExperimentConfig()))
        self.assertNotEqual(config_hash(steady_config), config_hash(ExperimentConfig(solver=steady_config.solver,
                                                                                     seed=1)))
        self.assertEqual(len(config_hash(steady_config)), 64)

    def test_expand_sweep(self):
        config = ExperimentConfig(sweep={'gamma': [1.4, 2.0, 3.0], 'n_cells': [64, 128]})
        self.assertEqual(config.sweep.size, 6)

        configs = config.expand_sweep()
        self.assertEqual(len(configs), 6)
        self.assertEqual(len(set(config_hash(c) for c in configs)), 6)
        self.assertEqual(sorted(set(c.solver.gamma for c in configs)), [1.4, 2.0, 3.0])
        for c in configs:
            self.assertEqual(c.sweep.size, 1)

        single = ExperimentConfig().expand_sweep()
        self.assertEqual(single, [ExperimentConfig()])

    def test_replace_solver(self):
        config = steady_config.replace_solver(n_cells=96)
        self.assertEqual(config.solver.n_cells, 96)
        self.assertEqual(steady_config.solver.n_cells, 64)
