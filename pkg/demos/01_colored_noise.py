"""
Colored thermal force for a Lorentzian bath
===========================================

A bath with a Lorentzian spectral density J(w) pushes the oscillator with a
Gaussian force whose power spectrum is pi J(w)/w N(w, T).  Quantum noise
uses N = w coth(w/2T); classical noise uses N = 2T.  At low temperature the
two differ wherever w >> T, which here is the whole resonance.

This script synthesizes both kinds, compares the averaged periodogram with
the target around the resonance, and compares the two-time correlation with
the quadrature of its defining integral.
"""

import numpy as np

from qlangevin.noise import NoiseTrace, autocorrelation, derive_rng, estimate_psd, gaussianity_stats, synthesize_batch
from qlangevin.spectral import BathSpec, Lorentzian, NoiseKind, eval_force_psd, force_autocorrelation

j = Lorentzian(lam=0.3, omega0=0.5, gamma=0.1)
dt, n, n_traces = 0.1, 1 << 15, 40

for kind in (NoiseKind.QUANTUM, NoiseKind.CLASSICAL):
    bath = BathSpec(j, temperature=0.1, kind=kind)
    rngs = [derive_rng(7, k) for k in range(n_traces)]
    data = synthesize_batch(lambda w: eval_force_psd(bath, w), dt, n, rngs, pad_factor=2)
    traces = [NoiseTrace(dt, row, 7) for row in data]

    # spectrum: averaged periodogram next to the target
    est = estimate_psd(traces, nperseg=4096)
    print(f"\n{kind.value} noise at T = 0.1 ({est.n_segments} periodogram segments)")
    print("   omega    estimate      target")
    for w in (0.3, 0.45, 0.5, 0.55, 0.7, 1.5):
        k = np.argmin(np.abs(est.freq_grid - w))
        print(f"  {est.freq_grid[k]:6.3f}  {est.psd_values[k]:10.4e}  {eval_force_psd(bath, est.freq_grid[k]):10.4e}")

    # two-time correlation: estimate against quadrature
    lags = np.array([0, 10, 30, 60, 120])
    acf = np.mean([autocorrelation(tr, lags[-1]) for tr in traces], axis=0)[lags]
    print("     tau    estimate      quadrature")
    for lag, a in zip(lags, acf):
        print(f"  {lag * dt:6.1f}  {a:+10.4e}  {force_autocorrelation(bath, lag * dt):+10.4e}")

    g = gaussianity_stats(traces)
    print(f"  skewness {g.skewness:+.4f}, excess kurtosis {g.excess_kurtosis:+.4f} over {g.n_samples} samples")
