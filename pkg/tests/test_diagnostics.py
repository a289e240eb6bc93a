import math
import unittest

import numpy as np

from s2shock import exceptions
from s2shock.diagnostics import (blowup_time, diagnose, holder_seminorm, holder_seminorm_dense, location_report,
                                 rate_fit, scaling_exponent, vacuum_check)
from .sample import burgers_record


class DiagnosticsTestCase(unittest.TestCase):

    def test_blowup_time(self):
        self.assertAlmostEqual(blowup_time(burgers_record()), 1e-2, places=12)
        self.assertAlmostEqual(blowup_time(burgers_record(tau0=5e-3)), 5e-3, places=12)

    def test_blowup_time_skips_unresolved_samples(self):
        record = burgers_record()
        for k, smp in enumerate(record.samples):
            smp['dy'] = 0.01
            if k >= 50:
                # a smeared front lags the exact slope
                smp['dy'] = 0.2
                smp['max_slope'] = 1.0 / (1.0 / smp['max_slope'] + 1e-4)

        self.assertAlmostEqual(blowup_time(record), 1e-2, places=12)
        self.assertGreater(blowup_time(record, max_dy=1.0), 1e-2 + 1e-6)

        record.config['diagnostics']['fit_max_dy'] = 1.0
        self.assertGreater(blowup_time(record), 1e-2 + 1e-6)

    def test_rate(self):
        exponent, stderr = rate_fit(burgers_record())
        self.assertAlmostEqual(exponent, -1.0, places=6)
        self.assertLess(stderr, 1e-6)

    def test_diagnose_exact_blowup(self):
        report = diagnose(burgers_record())

        self.assertTrue(report.passed, report.failed_checks)
        self.assertEqual(report.status, 'blew_up')
        self.assertAlmostEqual(report.T_star, 1e-2, places=12)
        self.assertEqual(report.T_star_tracker, 1e-2)
        self.assertAlmostEqual(report.rate_exponent, -1.0, places=6)
        self.assertEqual(report.holder_seminorm_max, 1.0)
        self.assertEqual(report.min_sigma, 2.0)
        self.assertEqual(set(report.checks), {'blowup_time', 'rate', 'drift', 'exterior_slope', 'holder', 'vacuum'})

    def test_too_few_samples(self):
        record = burgers_record(n=5)

        def should_raise_time():
            blowup_time(record)

        self.assertRaises(exceptions.DiagnosticUndefinedError, should_raise_time)

        def should_raise_rate():
            rate_fit(record, T_star=1e-2)

        self.assertRaises(exceptions.DiagnosticUndefinedError, should_raise_rate)

    def test_less_than_a_decade(self):
        record = burgers_record(decades=0.5)
        self.assertAlmostEqual(blowup_time(record), 1e-2, places=12)

        def should_raise():
            rate_fit(record)

        self.assertRaises(exceptions.DiagnosticUndefinedError, should_raise)

        report = diagnose(record)
        self.assertFalse(report.passed)
        self.assertEqual(report.failed_checks, ['rate'])
        self.assertTrue(math.isnan(report.checks['rate']['value']))

    def test_diagnose_without_blowup(self):
        record = burgers_record()
        record.status = 'max_time'
        report = diagnose(record)
        self.assertIsNone(report.T_star)
        self.assertNotIn('blowup_time', report.checks)
        self.assertTrue(report.passed)

    def test_diagnose_aborted_run(self):
        record = burgers_record()
        record.status = 'pole_singularity'
        report = diagnose(record)
        self.assertFalse(report.passed)
        self.assertEqual(report.failed_checks, ['completed'])
        self.assertNotIn('blowup_time', report.checks)

    def test_holder_of_cube_root(self):
        for k in (4, 6, 8):
            x = np.linspace(-1.0, 1.0, 2 ** k + 1)
            self.assertAlmostEqual(holder_seminorm(x, np.cbrt(x)), 2.0 ** (2.0 / 3.0), places=10)
        x = np.linspace(-1.0, 1.0, 65)
        self.assertAlmostEqual(holder_seminorm_dense(x, np.cbrt(x)), 2.0 ** (2.0 / 3.0), places=10)

    def test_holder_bounds_dense_from_below(self):
        x = np.linspace(0.0, 1.0, 50)
        f = np.sin(7.0 * x)
        self.assertLessEqual(holder_seminorm(x, f), holder_seminorm_dense(x, f) + 1e-12)
        self.assertEqual(holder_seminorm(x, np.full(50, 3.0)), 0.0)

    def test_holder_contract(self):
        def should_raise():
            holder_seminorm([0.0, 1.0], [0.0, 1.0])

        self.assertRaises(exceptions.ContractViolation, should_raise)

        def should_raise_shape():
            holder_seminorm_dense([0.0, 1.0, 2.0], [0.0, 1.0])

        self.assertRaises(exceptions.ContractViolation, should_raise_shape)

    def test_scaling_exponent(self):
        x = np.logspace(-3.0, 0.0, 20)
        slope, stderr = scaling_exponent(x, 3.0 * x ** 2)
        self.assertAlmostEqual(slope, 2.0)
        self.assertLess(stderr, 1e-10)

        def should_raise():
            scaling_exponent([1.0, -1.0], [1.0, 1.0])

        self.assertRaises(exceptions.DiagnosticUndefinedError, should_raise)

    def test_location_report(self):
        record = burgers_record()
        location = location_report(record)

        self.assertTrue(location['drift_ok'])
        self.assertLess(location['drift_max'], 1e-15)
        self.assertEqual(location['xi_star'], record.samples[-1]['xi'])
        self.assertEqual(location['exterior_slope_max'], 0.0)
        self.assertAlmostEqual(location['exterior_bound'], 100.0 + 2.0 * 0.1 ** (-2.0 / 3.0))

        for smp in record.samples:
            smp['xi'] += 1.0
        self.assertFalse(location_report(record)['drift_ok'])

    def test_vacuum_check(self):
        record = burgers_record()
        self.assertEqual(vacuum_check(record), (2.0, True))
        self.assertEqual(vacuum_check(record, sigma_inf=5.0), (2.0, False))
        record.samples[3]['min_sigma'] = 0.5
        self.assertEqual(vacuum_check(record), (0.5, False))
