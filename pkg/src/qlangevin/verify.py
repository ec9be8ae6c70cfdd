"""Reduced cross-check suite used by ``qlangevin verify``.

Each check compares two independent routes to the same quantity and
records the achieved discrepancy, the tolerance (scaled by ``tol_scale``)
and a short anchor naming the property being checked.
"""

from __future__ import annotations

import math

import numpy as np

from .engine import SimConfig, build_embedding, integrate_trajectory, run_ensemble
from .network import Attachment, NetworkSpec, build_network, network_steady_covariances, run_network_ensemble
from .noise import derive_rng, estimate_psd, NoiseTrace, synthesize_batch
from .oracle import (
    covariance_evolution,
    g_functions,
    gibbs_covariances,
    mean_force_covariances,
    steady_covariances_matsubara,
    steady_covariances_quadrature,
)
from .spectral import BathSpec, Lorentzian, NoiseKind, OscillatorParams, eval_force_psd


def _rel(a, b):
    return max(abs(a.sigma_xx / b.sigma_xx - 1), abs(a.sigma_pp / b.sigma_pp - 1))


def run_checks(tol_scale=1.0, seed=2024, threads=None, n_traj=2000):
    checks = []

    def add(name, value, tol, anchor):
        tol = tol * tol_scale
        checks.append({"name": name, "passed": bool(value <= tol), "value": float(value),
                       "tolerance": float(tol), "anchor": anchor})

    p = OscillatorParams()
    weak = Lorentzian(0.3, 0.5, 0.1)

    g = g_functions(p, weak)
    add("residue sum", abs(np.sum(g.residues_g2)), 1e-12, "pole-residue identities")
    add("residue first moment minus 1/m", abs(np.sum(g.residues_g2 * g.poles) - 1 / p.mass), 1e-12,
        "pole-residue identities")

    for lam in (0.3, 2.0):
        j = Lorentzian(lam, 0.5, 0.1)
        for temp in (0.1, 1.0, 10.0):
            q = steady_covariances_quadrature(p, BathSpec(j, temp))
            add(f"Matsubara vs quadrature lam={lam} T={temp}",
                _rel(steady_covariances_matsubara(p, j, temp), q), 1e-6, "Matsubara series")
            add(f"mean-force (closed PV) vs quadrature lam={lam} T={temp}",
                _rel(mean_force_covariances(p, j, temp, pv="closed"), q), 1e-5, "mean-force Gibbs state")
    q = steady_covariances_quadrature(p, BathSpec(weak, 1.0))
    add("mean-force (numeric PV) vs quadrature lam=0.3 T=1",
        _rel(mean_force_covariances(p, weak, 1.0, pv="numeric"), q), 1e-5, "principal value integral")

    levels = np.arange(400)
    pops = np.exp(-levels / 1.0)
    sxx_sum = float(np.sum(pops * (levels + 0.5)) / np.sum(pops))
    add("Gibbs covariance vs number-state sum T=1", abs(gibbs_covariances(p, 1.0).sigma_xx / sxx_sum - 1),
        1e-12, "thermal state of the bare oscillator")

    # noise spectrum
    b = BathSpec(weak, 0.1)
    rngs = [derive_rng(seed, k, 1) for k in range(20)]
    data = synthesize_batch(lambda w: eval_force_psd(b, w), 0.1, 1 << 15, rngs, 2)
    est = estimate_psd([NoiseTrace(0.1, row, seed) for row in data], nperseg=4096)
    sel = (est.freq_grid >= 0.2) & (est.freq_grid <= 0.8)
    ratio = np.sum(est.psd_values[sel]) / np.sum(eval_force_psd(b, est.freq_grid[sel]))
    add("band-averaged noise PSD vs target", abs(ratio - 1), 0.05, "fluctuation-dissipation relation")

    # integrators, driven by one shared classical-noise realization
    bc = BathSpec(weak, 0.1, NoiseKind.CLASSICAL)
    fine = 0.0025
    drive = synthesize_batch(lambda w: eval_force_psd(bc, w), fine, 4001, [derive_rng(seed, 0, 1)], 4)[0]
    diffs = []
    for dt in (0.02, 0.01):
        stride = int(round(0.5 * dt / fine))
        common = dict(dt=dt, t_final=10.0, n_traj=1, master_seed=seed)
        a = integrate_trajectory(SimConfig(**common), p, bc, 0, force=drive[::stride])
        c = integrate_trajectory(SimConfig(integrator="convolution", **common), p, bc, 0, force=drive[::stride])
        diffs.append(np.max(np.abs(a.x - c.x)))
    # value is the shortfall of the observed order below 2
    add("embedded vs convolution: convergence order deficit under dt halving",
        max(0.0, 2.0 - math.log2(diffs[0] / diffs[1])), 0.1, "memory-kernel embedding")
    free = SimConfig(dt=0.01, t_final=20.0, n_traj=1, master_seed=seed, mu0=(1.0, 0.0),
                     sigma0=(0.0, 0.0, 0.0), noise=False)
    tr = integrate_trajectory(free, p, b, 0)
    add("noise-free trajectory vs g1", float(np.max(np.abs(tr.x - g.g1(tr.t)))), 1e-6, "mean evolution")

    # ensemble vs exact moments
    cfg = SimConfig(dt=0.05, t_final=20.0, n_traj=n_traj, master_seed=seed, record_every=40, threads=threads)
    for kind in (NoiseKind.QUANTUM, NoiseKind.CLASSICAL):
        bk = BathSpec(weak, 0.1, kind)
        st = run_ensemble(cfg, p, bk)
        ex = covariance_evolution(g, bk, cfg.sigma0, st.t)
        z = max(float(np.max(np.abs(getattr(st, "sigma_" + c) - getattr(ex, "sigma_" + c))
                             / getattr(st, "se_" + c))) for c in ("xx", "xp", "pp"))
        add(f"{kind.value} ensemble vs exact covariances (max |z|)", z, 4.0, "dynamical covariances")

    # network reductions
    net = build_network(NetworkSpec(np.eye(1), np.eye(1), (Attachment((0,), b),)))
    poles_net = np.sort_complex(net.poles())
    poles_one = np.sort_complex(build_embedding(p, weak).eigenvalues())
    add("one-node network poles vs single oscillator", float(np.max(np.abs(poles_net - poles_one))), 0.0,
        "network reduction")
    ss = network_steady_covariances(net)
    q = steady_covariances_quadrature(p, b)
    add("one-node network steady state vs quadrature",
        max(abs(ss.c_xx[0, 0] / q.sigma_xx - 1), abs(ss.c_pp[0, 0] / q.sigma_pp - 1)), 1e-8, "network reduction")
    small = SimConfig(dt=0.05, t_final=5.0, n_traj=20, master_seed=seed, record_every=10, threads=threads)
    r_net = run_network_ensemble(net, small)
    r_one = run_ensemble(small, p, b)
    add("one-node network ensemble vs single-oscillator ensemble",
        float(np.max(np.abs(r_net.c_xx[:, 0, 0] - r_one.sigma_xx))), 0.0, "network reduction")
    return {"seed": seed, "tol_scale": tol_scale, "checks": checks}
