"""
s2shock: config.py

Contains ExperimentConfig and its blocks which hold every knob of a run,
load them from YAML documents, validate them and resolve derived defaults.

License: MIT
"""

import copy
import hashlib
import io
import itertools
import json
import math

from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from .data_models import DataModel
from .exceptions import ConfigError, PersistenceError, UsageError

__all__ = ['SolverConfig', 'ModulationConfig', 'DiagnosticsConfig', 'GeometryConfig', 'SweepConfig',
           'OutputConfig', 'ExperimentConfig', 'load_config', 'dump_config', 'config_hash']

PI = math.pi


class _ConfigBlock(DataModel):
    """
    Base class for config blocks.

    Subclasses list their keys and defaults in `_defaults`; unknown keys are
    rejected and `_validate` checks the values after assignment.
    """
    _defaults = {}

    def __init__(self, **kwargs):
        unknown = sorted(set(kwargs) - set(self._defaults))
        if unknown:
            raise ConfigError('Unknown configuration keys',
                              details='{}: {}'.format(self.__class__.__name__, ', '.join(unknown)))
        for key, default in self._defaults.items():
            setattr(self, key, copy.deepcopy(kwargs.get(key, default)))
        self._validate()

    def _validate(self):
        pass

    def _require(self, ok, key, reason):
        if not ok:
            raise ConfigError(details='{}.{}={!r}: {}'.format(self.block_name, key, getattr(self, key), reason))

    @property
    def block_name(self):
        return self.__class__.__name__.replace('Config', '').lower()

    def replace(self, **kwargs):
        dct = self.to_dict()
        dct.update(kwargs)
        return self.__class__(**dct)


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


class SolverConfig(_ConfigBlock):
    """
    Physical parameters, grid and stopping rules of the equivariant solver.

    `None` entries are derived by :meth:`resolved`: blowup_slope_cap -> 1e4 / tau0,
    t_max -> 2 tau0, frame_speed -> 2 beta3 sigma_inf (0 in flat mode),
    smooth_width -> xi0 / 20. initial_data 'steady' starts from the uniform background
    instead of the truncated profile. theta_min / theta_max stay None; :meth:`window`
    derives the grid range from the support window and the characteristic speeds.

    initial_dy, when set, replaces n_cells on resolution by the cell count whose
    self-similar spacing dx tau0^(-3/2) at s0 is at most initial_dy, so runs at
    different tau0 are equally resolved.
    """
    _defaults = {
        'gamma': 1.4,
        'sigma_inf': 2.0,
        'xi0': PI / 16.0,
        'tau0': 1e-2,
        'n_cells': 8192,
        'cfl': 0.4,
        'flat_mode': False,
        'modulation_coupling': True,
        'blowup_slope_cap': None,
        'dt_floor': 1e-12,
        't_max': None,
        'theta_min': None,
        'theta_max': None,
        'frame_speed': None,
        'slope_cfl': 0.02,
        'sample_every': 10,
        'resolution_cells': 4.0,
        'enforce_regime': True,
        'pole_margin': PI / 16.0,
        'support_tol': 1e-10,
        'smooth_width': None,
        'initial_data': 'profile',
        'initial_dy': None,
    }

    def _validate(self):
        self._require(_is_number(self.gamma) and self.gamma > 1.0, 'gamma', 'must exceed 1')
        self._require(_is_number(self.sigma_inf) and self.sigma_inf > 0.0, 'sigma_inf', 'must be positive')
        self._require(_is_number(self.xi0), 'xi0', 'must be a finite number')
        self._require(_is_number(self.tau0) and 0.0 < self.tau0 < 1.0, 'tau0', 'must lie in (0, 1)')
        self._require(isinstance(self.n_cells, int) and not isinstance(self.n_cells, bool) and self.n_cells >= 32,
                      'n_cells', 'must be an integer >= 32')
        self._require(_is_number(self.cfl) and 0.0 < self.cfl <= 1.0, 'cfl', 'must lie in (0, 1]')
        self._require(_is_number(self.slope_cfl) and self.slope_cfl > 0.0, 'slope_cfl', 'must be positive')
        self._require(_is_number(self.dt_floor) and self.dt_floor > 0.0, 'dt_floor', 'must be positive')
        self._require(isinstance(self.sample_every, int) and self.sample_every >= 1, 'sample_every',
                      'must be a positive integer')
        self._require(_is_number(self.resolution_cells) and self.resolution_cells >= 0.0, 'resolution_cells',
                      'must be non-negative')
        self._require(_is_number(self.pole_margin) and 0.0 < self.pole_margin < PI / 2.0, 'pole_margin',
                      'must lie in (0, pi/2)')
        self._require(_is_number(self.support_tol) and self.support_tol > 0.0, 'support_tol', 'must be positive')
        self._require(self.initial_data in ('profile', 'steady'), 'initial_data', "must be 'profile' or 'steady'")
        for key in ('blowup_slope_cap', 't_max', 'smooth_width', 'initial_dy'):
            value = getattr(self, key)
            self._require(value is None or (_is_number(value) and value > 0.0), key, 'must be positive or null')
        for key in ('theta_min', 'theta_max', 'frame_speed'):
            value = getattr(self, key)
            self._require(value is None or _is_number(value), key, 'must be a number or null')
        if self.theta_min is not None and self.theta_max is not None:
            self._require(self.theta_min < self.theta_max, 'theta_min', 'must be below theta_max')
        if self.smooth_width is not None:
            self._require(self.smooth_width < abs(self.xi0) / 10.0, 'smooth_width', 'must be below xi0 / 10')

        if self.enforce_regime:
            self._require(PI / 16.0 - 1e-12 <= self.xi0 <= PI / 8.0 + 1e-12, 'xi0', 'must lie in [pi/16, pi/8]')
            beta3 = (self.gamma - 1.0) / (self.gamma + 1.0)
            self._require(self.sigma_inf > self.xi0 ** (1.0 / 3.0) / (2.0 * beta3), 'sigma_inf',
                          'must exceed xi0^(1/3) / (2 beta3)')

    @property
    def beta2(self):
        return (3.0 - self.gamma) / (self.gamma + 1.0)

    @property
    def beta3(self):
        return (self.gamma - 1.0) / (self.gamma + 1.0)

    def window(self):
        """
        Co-moving grid range (theta_min, theta_max) of a resolved config.

        The default range holds the initial support (-xi0/10, xi0/10) carried by
        the extreme characteristic speeds over 1.25 t_max, plus a quarter of the
        support half-width on both sides. The z family only enters outside flat
        mode.

        Raises
        ------
        ConfigError
            the range does not contain the support window
        """
        half = abs(self.xi0) / 10.0
        # |w - kappa0| <= |theta|^(1/3) on the profile data
        spread = half ** (1.0 / 3.0) if self.initial_data == 'profile' else 0.0
        w_lo, w_hi = self.sigma_inf - spread, self.sigma_inf + spread
        z = -self.sigma_inf
        fs = self.frame_speed
        speeds = [w_lo + self.beta2 * z - fs, w_hi + self.beta2 * z - fs]
        if not self.flat_mode:
            speeds += [self.beta2 * w_lo + z - fs, self.beta2 * w_hi + z - fs]
        reach = 1.25 * self.t_max
        pad = 0.25 * half
        lo = -half + reach * min(0.0, min(speeds)) - pad
        hi = half + reach * max(0.0, max(speeds)) + pad
        if self.theta_min is not None:
            lo = self.theta_min
        if self.theta_max is not None:
            hi = self.theta_max
        if not (lo < -half and half < hi):
            raise ConfigError('support window exceeds the grid',
                              details='window ({}, {}) vs support (-{}, {})'.format(lo, hi, half, half))
        return lo, hi

    def resolved(self):
        dct = self.to_dict()
        if dct['blowup_slope_cap'] is None:
            dct['blowup_slope_cap'] = 1e4 / self.tau0
        if dct['t_max'] is None:
            dct['t_max'] = 2.0 * self.tau0
        if dct['frame_speed'] is None:
            dct['frame_speed'] = 0.0 if self.flat_mode else 2.0 * self.beta3 * self.sigma_inf
        if dct['smooth_width'] is None:
            dct['smooth_width'] = abs(self.xi0) / 20.0
        solver = SolverConfig(**dct)
        if solver.initial_dy is not None:
            lo, hi = solver.window()
            cells = int(math.ceil((hi - lo) / (solver.initial_dy * solver.tau0 ** 1.5))) + 1
            solver = solver.replace(n_cells=max(32, cells))
        return solver


class ModulationConfig(_ConfigBlock):
    """Tracker choice: 'extremal' follows the steepest point, 'ode' integrates the modulation rates."""
    _defaults = {
        'tracker': 'extremal',
        'validate_every': 10,
    }

    def _validate(self):
        self._require(self.tracker in ('extremal', 'ode'), 'tracker', "must be 'extremal' or 'ode'")
        self._require(isinstance(self.validate_every, int) and self.validate_every >= 1, 'validate_every',
                      'must be a positive integer')

    def resolved(self):
        return ModulationConfig(**self.to_dict())


class DiagnosticsConfig(_ConfigBlock):
    """
    Constants of the bootstrap monitors and pass criteria.

    l defaults to (ln M)^-5 and L to tau0^(-1/10); both need tau0 so they are
    filled in by :meth:`ExperimentConfig.resolved`. fit_max_dy is the largest
    self-similar spacing of a sample used by the blow-up time fit.
    """
    _defaults = {
        'M': 100.0,
        'l': None,
        'L': None,
        'delta': 0.1,
        'holder_exponent': 1.0 / 3.0,
        'holder_bound': 5.0,
        'bootstrap_every': 1,
        'rate_tolerance': 0.05,
        'fit_max_dy': 0.05,
    }

    def _validate(self):
        self._require(_is_number(self.M) and self.M > math.e, 'M', 'must exceed e')
        for key in ('l', 'L'):
            value = getattr(self, key)
            self._require(value is None or (_is_number(value) and value > 0.0), key, 'must be positive or null')
        self._require(_is_number(self.delta) and 0.0 < self.delta < 1.0, 'delta', 'must lie in (0, 1)')
        self._require(_is_number(self.holder_exponent) and 0.0 < self.holder_exponent <= 1.0, 'holder_exponent',
                      'must lie in (0, 1]')
        self._require(_is_number(self.holder_bound) and self.holder_bound > 0.0, 'holder_bound', 'must be positive')
        self._require(isinstance(self.bootstrap_every, int) and self.bootstrap_every >= 0, 'bootstrap_every',
                      'must be a non-negative integer')
        self._require(_is_number(self.rate_tolerance) and self.rate_tolerance > 0.0, 'rate_tolerance',
                      'must be positive')
        self._require(_is_number(self.fit_max_dy) and self.fit_max_dy > 0.0, 'fit_max_dy', 'must be positive')

    def resolved(self, tau0):
        dct = self.to_dict()
        if dct['l'] is None:
            dct['l'] = math.log(self.M) ** -5
        if dct['L'] is None:
            dct['L'] = tau0 ** -0.1
        return DiagnosticsConfig(**dct)


class GeometryConfig(_ConfigBlock):
    """Sphere radius of the 2D formula evaluators, limited by r0 + 1/r0 <= 100."""
    _defaults = {
        'r0': 1.0,
    }

    def _validate(self):
        self._require(_is_number(self.r0) and self.r0 > 0.0 and self.r0 + 1.0 / self.r0 <= 100.0, 'r0',
                      'must satisfy r0 + 1/r0 <= 100')

    def resolved(self):
        return GeometryConfig(**self.to_dict())


class SweepConfig(_ConfigBlock):
    """Lists crossed into a parameter sweep; empty lists keep the solver value."""
    _defaults = {
        'gamma': [],
        'tau0': [],
        'n_cells': [],
        'xi0': [],
        'workers': 1,
    }

    def _validate(self):
        for key in ('gamma', 'tau0', 'n_cells', 'xi0'):
            self._require(isinstance(getattr(self, key), list), key, 'must be a list')
        self._require(isinstance(self.workers, int) and self.workers >= 1, 'workers', 'must be a positive integer')

    @property
    def size(self):
        size = 1
        for key in ('gamma', 'tau0', 'n_cells', 'xi0'):
            size *= max(1, len(getattr(self, key)))
        return size

    def resolved(self):
        return SweepConfig(**self.to_dict())


class OutputConfig(_ConfigBlock):
    """Output directory and snapshot cadence (in samples, 0 disables)."""
    _defaults = {
        'dir': 'out',
        'snapshot_every': 0,
        'emit_selfsim': 0,
    }

    def _validate(self):
        self._require(isinstance(self.dir, str) and self.dir != '', 'dir', 'must be a non-empty path')
        for key in ('snapshot_every', 'emit_selfsim'):
            self._require(isinstance(getattr(self, key), int) and getattr(self, key) >= 0, key,
                          'must be a non-negative integer')

    def resolved(self):
        return OutputConfig(**self.to_dict())


_BLOCKS = (
    ('solver', SolverConfig),
    ('modulation', ModulationConfig),
    ('diagnostics', DiagnosticsConfig),
    ('geometry', GeometryConfig),
    ('sweep', SweepConfig),
    ('output', OutputConfig),
)


class ExperimentConfig(DataModel):
    """
    The whole configuration document of an experiment.

    Attributes
    ----------
    solver, modulation, diagnostics, geometry, sweep, output : config blocks

    seed : int
        seed of every sampling-based check
    """

    def __init__(self, solver=None, modulation=None, diagnostics=None, geometry=None, sweep=None, output=None,
                 seed=0):
        given = dict(solver=solver, modulation=modulation, diagnostics=diagnostics, geometry=geometry,
                     sweep=sweep, output=output)
        for name, klass in _BLOCKS:
            block = given[name]
            if block is None:
                block = klass()
            elif isinstance(block, dict):
                block = klass(**block)
            elif not isinstance(block, klass):
                raise ConfigError(details='block {} must be a mapping'.format(name))
            setattr(self, name, block)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError(details='seed={!r}: must be an integer'.format(seed))
        self.seed = seed

    @classmethod
    def from_dict(cls, dct):
        if dct is None:
            return cls()
        if not isinstance(dct, dict):
            raise ConfigError(details='configuration root must be a mapping')
        unknown = sorted(set(dct) - set(name for name, _ in _BLOCKS) - {'seed'})
        if unknown:
            raise ConfigError('Unknown configuration blocks', details=', '.join(unknown))
        return cls(**dct)

    def resolved(self):
        """Copy with every derived default filled in."""
        solver = self.solver.resolved()
        return ExperimentConfig(solver=solver, modulation=self.modulation.resolved(),
                                diagnostics=self.diagnostics.resolved(solver.tau0),
                                geometry=self.geometry.resolved(), sweep=self.sweep.resolved(),
                                output=self.output.resolved(), seed=self.seed)

    def replace_solver(self, **kwargs):
        dct = self.to_dict()
        dct['solver'].update(kwargs)
        return ExperimentConfig.from_dict(dct)

    def expand_sweep(self):
        """One config per point of the sweep cross product, sweep block emptied."""
        keys = ('gamma', 'tau0', 'n_cells', 'xi0')
        axes = [getattr(self.sweep, k) or [getattr(self.solver, k)] for k in keys]
        configs = []
        for values in itertools.product(*axes):
            dct = self.to_dict()
            dct['solver'].update(dict(zip(keys, values)))
            dct['sweep'] = {'workers': self.sweep.workers}
            configs.append(ExperimentConfig.from_dict(dct))
        return configs


def config_hash(config):
    """SHA-256 of the canonical JSON of the resolved config."""
    canonical = json.dumps(config.resolved().to_dict(), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def load_config(path=None, text=None):
    """
    Load an ExperimentConfig from a YAML file or string.

    Parameters
    ----------
    path : str or pathlib.Path
        YAML document; ignored when `text` is given

    text : str
        YAML source

    Returns
    -------
    :class:`ExperimentConfig`
    """
    yaml = YAML(typ='safe')
    try:
        if text is not None:
            data = yaml.load(text)
        else:
            with open(str(path), 'r', encoding='utf-8') as fh:
                data = yaml.load(fh)
    except YAMLError as e:
        raise UsageError('Configuration is not valid YAML', details=str(e))
    except (IOError, OSError) as e:
        raise PersistenceError(details='{}: {}'.format(path, e))
    return ExperimentConfig.from_dict(data)


def dump_config(config, path=None):
    """
    Write the resolved config as YAML; returns the text when no path is given.
    """
    yaml = YAML(typ='safe')
    yaml.default_flow_style = False
    buf = io.StringIO()
    yaml.dump(config.resolved().to_dict(), buf)
    text = buf.getvalue()
    if path is None:
        return text
    try:
        with open(str(path), 'w', encoding='utf-8') as fh:
            fh.write(text)
    except (IOError, OSError) as e:
        raise PersistenceError(details='{}: {}'.format(path, e))
    return text
