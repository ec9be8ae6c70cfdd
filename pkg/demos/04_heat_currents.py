"""
Heat flow through two coupled oscillators
=========================================

Two unit oscillators joined by a spring kappa = 0.1 each touch their own
Lorentzian bath, the hot one at ten times the cold temperature.  The
steady-state heat currents follow from the stationary covariances.  They
are also measured directly as the mean power the bath forces deliver
along stochastic trajectories.  Energy conservation requires Q_H = -Q_C.
"""

from qlangevin.engine import SimConfig
from qlangevin.network import build_network, chain_spec, heat_currents_opensystems, network_steady_covariances, run_network_ensemble
from qlangevin.spectral import BathSpec, Lorentzian

j = Lorentzian(0.3, 0.5, 0.8)
cfg = SimConfig(dt=0.05, t_final=400.0, n_traj=1000, master_seed=99, record_every=400)

print("   T_C   Q_H (covariances)   Q_H (trajectories)      Q_C (trajectories)")
for t_cold in (0.1, 0.3, 1.0, 3.0):
    net = build_network(chain_spec(0.1, (BathSpec(j, 10 * t_cold), BathSpec(j, t_cold))))
    q_open = heat_currents_opensystems(net, network_steady_covariances(net))
    res = run_network_ensemble(net, cfg)
    hot, cold = res.heat
    print(f"  {t_cold:4.1f}   {q_open[0]:.5f}            {hot.steady:.5f} +- {hot.steady_se:.5f}"
          f"    {cold.steady:+.5f} +- {cold.steady_se:.5f}")
