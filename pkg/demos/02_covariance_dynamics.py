"""
Covariance dynamics from the ground state
=========================================

The oscillator (m = Omega = 1) starts in its ground state, sigma_xx =
sigma_pp = 1/2, and is coupled at t = 0 to a Lorentzian bath at T = 0.1.
The ensemble of stochastic trajectories is compared with the exact moments
from the pole expansion of the response functions.

With quantum-colored noise the uncertainty product sigma_xx sigma_pp -
sigma_xp^2 stays above 1/4.  With classical noise at the same temperature
the zero-point fluctuations drain away and the product falls well below 1/4.
"""

import numpy as np

from qlangevin.engine import SimConfig, run_ensemble
from qlangevin.oracle import covariance_evolution, g_functions
from qlangevin.spectral import BathSpec, Lorentzian, NoiseKind, OscillatorParams

osc = OscillatorParams(mass=1.0, omega=1.0)
j = Lorentzian(lam=0.3, omega0=0.5, gamma=0.1)
cfg = SimConfig(dt=0.05, t_final=100.0, n_traj=2000, master_seed=2024, record_every=200,
                sigma0=(0.5, 0.0, 0.5))
g = g_functions(osc, j)
print("poles of the response:", np.round(g.poles, 5))

for kind in (NoiseKind.QUANTUM, NoiseKind.CLASSICAL):
    bath = BathSpec(j, 0.1, kind)
    stats = run_ensemble(cfg, osc, bath)
    exact = covariance_evolution(g, bath, cfg.sigma0, stats.t)
    print(f"\n{kind.value} noise, {cfg.n_traj} trajectories")
    print("      t   sigma_xx (exact)        sigma_pp (exact)        uncertainty")
    for k, t in enumerate(stats.t):
        print(f"  {t:5.0f}   {stats.sigma_xx[k]:.4f} ({exact.sigma_xx[k]:.4f})"
              f"   {stats.sigma_pp[k]:.4f} ({exact.sigma_pp[k]:.4f})"
              f"   {stats.uncertainty[k]:.4f} +- {stats.se_uncertainty[k]:.4f}")
