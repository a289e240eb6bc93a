import math
import os
import tempfile
import unittest

import numpy as np

from s2shock import ModulationState, SelfSimField, exceptions
from s2shock.result_models import TrajectoryPath
from s2shock.riemann import betas
from s2shock.trajectories import (FrozenTransport, escape_certificate, growth_certificate, integrate_trajectory,
                                  leftward_certificate, weighted_integral, weighted_majorant)


def _stretch(s, y):
    return 1.5 * y


def _manual_path(s, phi, velocity):
    path = TrajectoryPath(s[0], phi[0])
    path.s = np.asarray(s, dtype=float)
    path.phi = np.asarray(phi, dtype=float)
    path.velocity = np.asarray(velocity, dtype=float)
    return path


class TrajectoriesTestCase(unittest.TestCase):

    def test_pure_stretching(self):
        path = integrate_trajectory(_stretch, 0.0, 1.0, 2.0, tag='W')

        self.assertEqual(path.status, 'ok')
        self.assertEqual(path.tag, 'W')
        self.assertAlmostEqual(path.s_end, 2.0)
        self.assertAlmostEqual(float(path(1.0)), math.exp(1.5), delta=1e-6 * math.exp(1.5))
        self.assertGreaterEqual(growth_certificate(path, 1.0 / 3.0), -1e-9)
        np.testing.assert_allclose(path.velocity, 1.5 * path.phi)

    def test_contracting_field_fails_growth(self):
        path = integrate_trajectory(lambda s, y: -y, 0.0, 1.0, 1.0)
        self.assertLess(growth_certificate(path, 1.0 / 3.0), 0.0)

    def test_weighted_integral_at_rest(self):
        path = integrate_trajectory(lambda s, y: 0.0, 0.0, 0.0, 1.0)
        self.assertAlmostEqual(weighted_integral(path, 2.0), 1.0, places=9)
        self.assertAlmostEqual(weighted_integral(path, 2.0, s_end=0.25), 0.25, places=9)

        def should_raise():
            weighted_integral(path, 10.0)

        self.assertRaises(exceptions.ContractViolation, should_raise)

    def test_weighted_integral_of_stretching(self):
        path = integrate_trajectory(_stretch, 0.0, 1.0, 4.0)
        value = weighted_integral(path, 2.0)
        # int_0^4 ds / (1 + exp(3 s))
        exact = 4.0 - (math.log(1.0 + math.exp(12.0)) - math.log(2.0)) / 3.0
        self.assertAlmostEqual(value, exact, places=6)
        self.assertLess(value, weighted_majorant(1.0, 2.0, 0.1, 10.0, 1e-2))

    def test_escape(self):
        path = integrate_trajectory(lambda s, y: y * y, 0.0, 1.0, 10.0, box=1e6)
        self.assertEqual(path.status, 'escaped')
        self.assertLess(path.s_end, 1.0)
        self.assertGreaterEqual(abs(path.phi[-1]), 1e6 * (1.0 - 1e-6))

    def test_interval_contract(self):
        def should_raise():
            integrate_trajectory(_stretch, 1.0, 1.0, 1.0)

        self.assertRaises(exceptions.ContractViolation, should_raise)

    def test_vector_start(self):
        path = integrate_trajectory(_stretch, 0.0, [1.0, 0.0], 1.0)
        self.assertEqual(path.phi.shape[1], 2)
        np.testing.assert_allclose(path(1.0), [math.exp(1.5), 0.0], rtol=1e-6, atol=1e-9)
        self.assertGreaterEqual(growth_certificate(path, 1.0 / 3.0), -1e-9)

    def test_weighted_majorant(self):
        l, L, tau0 = 0.1, 1.0, 1e-2
        self.assertAlmostEqual(weighted_majorant(0.5, 2.0, l, L, tau0), -4.0 * math.log(l))
        self.assertAlmostEqual(weighted_majorant(-2.0, 2.0, l, L, tau0), tau0 ** (2.0 / 11.0))
        self.assertAlmostEqual(weighted_majorant([0.0, 2.0], 2.0, l, L, tau0), tau0 ** (2.0 / 11.0))
        self.assertEqual(weighted_majorant(0.01, 2.0, l, L, tau0), math.inf)

    def test_leftward_certificate(self):
        path = _manual_path([0.0, 1.0], [-1.0, -1.0], [-10.0, -10.0])
        margin = leftward_certificate(path, 1.0 / 6.0, 2.0)
        self.assertAlmostEqual(margin, 10.0 - math.exp(0.5) / 6.0)

        path = _manual_path([0.0, 1.0], [-1.0, -1.0], [1.0, 1.0])
        self.assertLess(leftward_certificate(path, 1.0 / 6.0, 2.0), 0.0)

        far = _manual_path([0.0, 1.0], [100.0, 100.0], [1.0, 1.0])
        self.assertEqual(leftward_certificate(far, 1.0 / 6.0, 2.0), math.inf)

    def test_escape_certificate(self):
        path = _manual_path([0.0, 1.0, 2.0], [0.5, 1.0, 2.0], [0.5, 1.0, 2.0])
        margin = escape_certificate(path, 1.0)
        self.assertGreater(margin, 0.0)
        self.assertLess(margin, 1e-5)

        slow = _manual_path([0.0, 1.0, 4.0], [1.0, 1.0, 1.1], [0.0, 0.0, 0.0])
        self.assertLess(escape_certificate(slow, 1.0), 0.0)

        inside = _manual_path([0.0, 1.0], [0.1, 0.2], [0.1, 0.1])
        self.assertEqual(escape_certificate(inside, 1.0), math.inf)

    def test_frozen_transport(self):
        V = FrozenTransport([0.0, 1.0], [[-1.0, 1.0], [-1.0, 1.0]], [[0.0, 0.0], [2.0, 4.0]])

        self.assertAlmostEqual(V(0.5, 0.0), 1.5)
        self.assertAlmostEqual(V(-1.0, 0.5), 0.75)
        self.assertAlmostEqual(V(3.0, 5.0), 7.5 + 4.0)
        np.testing.assert_allclose(V(1.0, np.array([-1.0, 0.0])), [-1.5 + 2.0, 3.0])

    def test_frozen_transport_from_fields(self):
        b = betas(1.4)
        y = np.linspace(-4.0, 4.0, 81)
        fields, mods = [], []
        for s in (5.0, 5.5):
            fields.append(SelfSimField(s, y, -y, np.full(y.shape, -2.0), kappa=2.0))
            mods.append(ModulationState(2.0, 0.01, 0.2, dxi=2.0 - 2.0 * b.beta2))

        V = FrozenTransport.from_fields(fields, mods, b)
        np.testing.assert_array_equal(V.s, [5.0, 5.5])
        # g_W = -y when the frame rides with the shock, so the field is y / 2
        np.testing.assert_allclose(V(5.2, y), 0.5 * y, atol=1e-12)
        self.assertEqual(FrozenTransport.from_fields(fields, mods, b, tag='Z').tag, 'Z')

        path = integrate_trajectory(V, 5.0, 0.01, 5.5)
        self.assertGreaterEqual(growth_certificate(path, 1.0 / 3.0), -1e-9)

    def test_frozen_transport_contracts(self):
        def should_raise_count():
            FrozenTransport([0.0, 1.0], [[0.0, 1.0]], [[0.0, 1.0]])

        self.assertRaises(exceptions.ContractViolation, should_raise_count)

        def should_raise_order():
            FrozenTransport([1.0, 0.0], [[0.0, 1.0]] * 2, [[0.0, 1.0]] * 2)

        self.assertRaises(exceptions.ContractViolation, should_raise_order)

    def test_frozen_transport_from_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            paths = []
            for k, s in enumerate((2.0, 1.0)):
                path = os.path.join(tmp, 'selfsim_{}.csv'.format(k))
                with open(path, 'w') as fh:
                    fh.write('s,y,W,Z,g_W,g_Z\n')
                    for y in (-1.0, 0.0, 1.0):
                        fh.write('{},{},0,0,{},{}\n'.format(s, y, s * y, -s))
                paths.append(path)

            V_W = FrozenTransport.from_csv(paths, 'W')
            V_Z = FrozenTransport.from_csv(paths, 'Z')

        np.testing.assert_array_equal(V_W.s, [1.0, 2.0])
        self.assertAlmostEqual(V_W(1.0, 1.0), 1.5 + 1.0)
        self.assertAlmostEqual(V_Z(2.0, 0.0), -2.0)
        self.assertEqual(V_Z.tag, 'Z')

        def should_raise():
            FrozenTransport.from_csv([os.path.join('/nonexistent', 'selfsim.csv')])

        self.assertRaises(exceptions.PersistenceError, should_raise)
