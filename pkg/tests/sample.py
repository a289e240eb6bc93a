import math

import numpy as np

from s2shock import ExperimentConfig, ModulationState, SolverConfig
from s2shock.result_models import RunRecord

# uniform background, nothing compresses: runs to t_max in a few dozen steps
steady_solver = SolverConfig(n_cells=64, initial_data='steady', sample_every=1)
steady_config = ExperimentConfig(solver=steady_solver.to_dict())

# exact Burgers reduction for the characteristics oracle
flat_burgers_solver = SolverConfig(gamma=3.0, flat_mode=True, n_cells=512)

# grid reaching past the pole margin
pole_solver = SolverConfig(n_cells=64, initial_data='steady', theta_max=1.5)

modulation_sample1 = ModulationState(kappa=2.0, tau=0.01, xi=math.pi / 16.0, t_tilde=0.002, dtau=0.01, dxi=0.5)


def burgers_record(tau0=1e-2, n=61, decades=3.0):
    """Synthetic record of an exact Burgers blow-up at tau0: max slope = 1 / (tau0 - t)."""
    config = ExperimentConfig(solver=dict(tau0=tau0)).resolved()
    solver = config.solver
    beta3 = solver.beta3
    record = RunRecord(config=config.to_dict())
    for gap in tau0 * 10.0 ** -np.linspace(0.0, decades, n):
        t = tau0 - gap
        record.append({
            't': t, 'max_slope': 1.0 / gap, 'kappa': solver.sigma_inf, 'tau': tau0,
            'xi': solver.xi0 + 2.0 * beta3 * solver.sigma_inf * t, 's': -math.log(gap),
            'holder': 1.0, 'min_sigma': solver.sigma_inf, 'exterior_slope': 0.0,
            'dkappa_ode': 0.0, 'dtau_ode': 0.0, 'dxi_ode': 2.0 * beta3 * solver.sigma_inf,
        })
    record.status = 'blew_up'
    record.stop_reason = 'slope_cap'
    return record
