"""
s2shock: __init__.py

This package file exports data models, configuration and the experiment
classes of the shock formation lab for equivariant compressible Euler
flow on the sphere.

License: MIT
"""

__version__ = '0.1.0'

from . import exceptions
from . import result_models
from .data_models import (
    BetaConstants,
    EquivariantState,
    GeometryFrame,
    ModulationState,
    OriginConstraints,
    PhysVars,
    ProfileEval,
    RiemannVars,
    RotationState,
    SelfSimField,
    SpherePoint,
    StereoCoords,
    SystemMatrices
)
from .config import (
    DiagnosticsConfig,
    ExperimentConfig,
    GeometryConfig,
    ModulationConfig,
    OutputConfig,
    SolverConfig,
    SweepConfig,
    config_hash,
    dump_config,
    load_config
)
from .equivariant import run_until_blowup
from .diagnostics import diagnose
from .harness import (
    Experiment,
    Sweep,
    load_run,
    load_sweep,
    run_experiment,
    sweep
)
