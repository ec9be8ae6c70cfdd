"""
Steady state against temperature, weak and strong coupling
==========================================================

Four routes to the long-time covariances are compared:

* direct frequency quadrature of the response weighted by the force spectrum,
* the Matsubara series,
* the mean-force Gibbs state, which needs a principal value integral,
* the Gibbs state of the bare oscillator.

The first three agree to many digits.  The bare Gibbs state is close at
weak coupling and clearly off at strong coupling.
"""

from qlangevin.oracle import (
    gibbs_covariances,
    mean_force_covariances,
    steady_covariances_matsubara,
    steady_covariances_quadrature,
)
from qlangevin.spectral import BathSpec, Lorentzian, NoiseKind, OscillatorParams

osc = OscillatorParams()
for lam in (0.3, 2.0):
    j = Lorentzian(lam, 0.5, 0.1)
    print(f"\nlam = {lam}")
    print("      T   quadrature   Matsubara    mean-force   bare Gibbs     (sigma_xx)")
    for temp in (0.1, 0.3, 1.0, 3.0, 10.0):
        q = steady_covariances_quadrature(osc, BathSpec(j, temp))
        m = steady_covariances_matsubara(osc, j, temp)
        f = mean_force_covariances(osc, j, temp, pv="closed")
        gb = gibbs_covariances(osc, temp)
        print(f"  {temp:5.1f}   {q.sigma_xx:.8f}   {m.sigma_xx:.8f}   {f.sigma_xx:.8f}   {gb.sigma_xx:.8f}")

# Classical noise relaxes to the classical thermal state of the bare potential
j = Lorentzian(0.3, 0.5, 0.1)
q = steady_covariances_quadrature(osc, BathSpec(j, 0.7, NoiseKind.CLASSICAL))
print(f"\nclassical noise at T = 0.7: sigma_xx = {q.sigma_xx:.10f}, sigma_pp = {q.sigma_pp:.10f}")
