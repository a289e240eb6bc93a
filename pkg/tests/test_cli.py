import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stdout

from s2shock.cli import main
from s2shock.config import dump_config
from .sample import steady_config


def _run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def _write_selfsim(path, s):
    with open(path, 'w') as fh:
        fh.write('s,y,W,Z,Wbar,W_minus_Wbar,g_W,g_Z\n')
        for y in (-10.0, 0.0, 10.0):
            fh.write('{},{},0,-2,0,0,0,0\n'.format(s, y))


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name
        self.config_path = os.path.join(self.tmp, 'steady.yaml')
        dump_config(steady_config, self.config_path)

    def tearDown(self):
        self._tmp.cleanup()

    def test_print_defaults(self):
        code, out = _run(['--print-defaults'])
        self.assertEqual(code, 0)
        self.assertIn('solver:', out)
        self.assertIn('blowup_slope_cap: 1000000.0', out)

    def test_simulate_and_diagnose(self):
        out_dir = os.path.join(self.tmp, 'run')
        code, _ = _run(['--config', self.config_path, '--out', out_dir, '--log-level', 'WARNING', 'simulate'])
        self.assertEqual(code, 0)
        self.assertTrue(os.path.isfile(os.path.join(out_dir, 'run.jsonl')))

        code, out = _run(['--log-level', 'WARNING', 'diagnose', out_dir])
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report['status'], 'max_time')
        self.assertIn('vacuum', report['checks'])

    def test_profile_table(self):
        code, out = _run(['profile', 'table', '--n', '3'])
        self.assertEqual(code, 0)
        lines = out.strip().splitlines()
        self.assertEqual(len(lines), 10)
        self.assertEqual(lines[0], 'y1,y2,W,dW1,dW2,residual')

        code, _ = _run(['profile'])
        self.assertEqual(code, 2)

    def test_check_geometry(self):
        code, out = _run(['check-geometry', '--psi', '0.5', '--q12', '0.2', '--q13', '-0.4', '--q23', '0.6'])
        self.assertEqual(code, 0)
        self.assertEqual(out.strip().splitlines()[-1], 'PASS')

    def test_trajectories(self):
        run_dir = os.path.join(self.tmp, 'run')
        os.makedirs(os.path.join(run_dir, 'selfsim'))
        _write_selfsim(os.path.join(run_dir, 'selfsim', 'selfsim_0000.csv'), 5.0)
        _write_selfsim(os.path.join(run_dir, 'selfsim', 'selfsim_0001.csv'), 5.5)
        seeds = os.path.join(self.tmp, 'seeds.txt')
        with open(seeds, 'w') as fh:
            fh.write('0.5\n-1.0\n')

        code, out = _run(['--log-level', 'WARNING', 'trajectories', '--from-run', run_dir, '--seeds', seeds])
        self.assertEqual(code, 0)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], 'seed,y0,s,phi,weighted_p0.5,weighted_p1,weighted_p2')
        self.assertEqual(set(line.split(',')[0] for line in lines[1:]), {'0', '1'})

    def test_trajectories_need_snapshots(self):
        seeds = os.path.join(self.tmp, 'seeds.txt')
        with open(seeds, 'w') as fh:
            fh.write('1.0\n')
        code, _ = _run(['trajectories', '--from-run', self.tmp, '--seeds', seeds])
        self.assertEqual(code, 2)

    def test_exit_codes(self):
        code, _ = _run(['--config', os.path.join(self.tmp, 'missing.yaml'), 'simulate'])
        self.assertEqual(code, 3)

        bad = os.path.join(self.tmp, 'bad.yaml')
        with open(bad, 'w') as fh:
            fh.write('solver:\n  gamma: 0.5\n')
        code, _ = _run(['--config', bad, 'simulate'])
        self.assertEqual(code, 2)

        code, _ = _run([])
        self.assertEqual(code, 2)
