import math
import unittest

import numpy as np

from s2shock import EquivariantState, OriginConstraints, exceptions
from s2shock.equivariant import initial_data
from s2shock.modulation import (constraints_from_field, cross_validate, extremal_details, integrate_ode_tracker,
                                ode_rhs, track_extremal)
from s2shock.riemann import betas
from .sample import burgers_record, modulation_sample1, steady_solver


class ModulationTestCase(unittest.TestCase):

    def test_constraints_on_polynomials(self):
        grid = np.linspace(-1.0, 1.0, 201)
        state = EquivariantState(grid, 2.0 + 0.5 * grid - grid ** 2 + 3.0 * grid ** 3, 1.0 - grid ** 2,
                                 xi_frame=0.2)
        c = constraints_from_field(state, 0.2 + 0.123)
        th = 0.123

        self.assertAlmostEqual(c.w_at_xi, 2.0 + 0.5 * th - th ** 2 + 3.0 * th ** 3, places=6)
        self.assertAlmostEqual(c.dw, 0.5 - 2.0 * th + 9.0 * th ** 2, places=6)
        self.assertAlmostEqual(c.d2w, -2.0 + 18.0 * th, places=6)
        self.assertAlmostEqual(c.d3w, 18.0, places=6)
        self.assertAlmostEqual(c.z_at_xi, 1.0 - th ** 2, places=6)
        self.assertAlmostEqual(c.dz, -2.0 * th, places=6)
        self.assertAlmostEqual(c.d2z, -2.0, places=6)

    def test_constraints_margin(self):
        grid = np.linspace(-1.0, 1.0, 201)
        state = EquivariantState(grid, grid, grid)

        def should_raise():
            constraints_from_field(state, grid[0] + 3.0 * state.dx)

        self.assertRaises(exceptions.MarginError, should_raise)

    def test_extremal_ties(self):
        grid = np.linspace(0.0, 1.0, 41)
        state = EquivariantState(grid, np.zeros(41), np.zeros(41), t_tilde=0.1, xi_frame=0.5)
        dw = np.zeros(41)
        dw[10] = dw[30] = -5.0

        found = extremal_details(state, dw)
        self.assertTrue(found['ambiguous'])
        self.assertEqual(found['index'], 10)
        self.assertAlmostEqual(found['xi'], grid[10] + 0.5)
        self.assertAlmostEqual(found['slope'], -5.0)
        self.assertAlmostEqual(found['tau'], 0.3)

        dw = np.zeros(41)
        dw[10] = dw[11] = -5.0
        found = extremal_details(state, dw)
        self.assertFalse(found['ambiguous'])
        self.assertEqual(found['index'], 10)

    def test_flat_field_is_not_ambiguous(self):
        state = initial_data(steady_solver)
        found = extremal_details(state)
        self.assertFalse(found['ambiguous'])
        self.assertEqual(found['tau'], math.inf)

    def test_track_extremal(self):
        grid = np.linspace(-0.2, 0.2, 801)
        state = EquivariantState(grid, 2.0 - np.arctan((grid - 0.05) / 0.01), np.zeros(801), xi_frame=0.1)
        xi, kappa, tau = track_extremal(state)

        self.assertAlmostEqual(xi, 0.15, places=6)
        self.assertAlmostEqual(kappa, 2.0, places=6)
        self.assertAlmostEqual(tau, 0.01, places=6)

    def test_ode_rhs_degenerate(self):
        constraints = OriginConstraints(2.0, -1.0, 0.0, 1.0, -2.0, 0.0, 0.0)

        def should_raise():
            ode_rhs(constraints, modulation_sample1, betas(1.4), -2.0, 0.0, 0.0)

        self.assertRaises(exceptions.RhsDegenerateError, should_raise)

    def test_ode_rhs_without_forcing(self):
        b = betas(1.4)
        mod = modulation_sample1
        constraints = OriginConstraints(2.0, 0.0, 0.0, 6.0 * math.exp(4.0 * mod.s), -2.0, 0.0, 0.0)
        for flat_mode in (False, True):
            dkappa, dtau, dxi = ode_rhs(constraints, mod, b, -2.0, 0.0, 0.0, flat_mode=flat_mode)
            self.assertEqual(dkappa, 0.0)
            self.assertEqual(dtau, 0.0)
            self.assertAlmostEqual(dxi, 2.0 * (1.0 - b.beta2))

    def test_ode_tracker_step(self):
        b = betas(1.4)
        mod = modulation_sample1
        grid = np.linspace(-0.01, 0.01, 201)
        state = EquivariantState(grid, 2.0 + math.exp(4.0 * mod.s) * grid ** 3, np.full(201, -2.0),
                                 t_tilde=mod.t_tilde, xi_frame=mod.xi)
        new, fell_back = integrate_ode_tracker(mod, state, b, 1e-4)

        self.assertFalse(fell_back)
        self.assertAlmostEqual(new.kappa, 2.0, places=6)
        self.assertAlmostEqual(new.tau, mod.tau, places=6)
        self.assertAlmostEqual(new.xi, mod.xi + 1e-4 * 2.0 * (1.0 - b.beta2), places=9)
        self.assertAlmostEqual(new.t_tilde, mod.t_tilde + 1e-4)

    def test_ode_tracker_falls_back(self):
        solver = steady_solver.resolved()
        b = betas(solver.gamma)
        state = initial_data(solver)
        mod = modulation_sample1.replace(t_tilde=0.0, xi=solver.xi0)
        new, fell_back = integrate_ode_tracker(mod, state, b, 1e-4)

        self.assertTrue(fell_back)
        self.assertEqual(new.tau, math.inf)
        self.assertAlmostEqual(new.kappa, solver.sigma_inf)
        self.assertAlmostEqual(new.dxi, solver.sigma_inf * (1.0 - b.beta2))

    def test_cross_validate_exact(self):
        report = cross_validate(burgers_record())

        self.assertTrue(report.passed, report.failed_checks)
        self.assertEqual(report.n_samples, 61)
        self.assertLess(report.max_dev_xi, 1e-12)
        self.assertEqual(report.max_dev_kappa, 0.0)
        self.assertIn('dxi', report.checks)

    def test_cross_validate_kappa_offset(self):
        record = burgers_record()
        for smp in record.samples:
            smp['kappa'] += 2.0
        report = cross_validate(record)

        self.assertFalse(report.passed)
        self.assertIn('kappa', report.failed_checks)
        self.assertNotIn('drift', report.failed_checks)
