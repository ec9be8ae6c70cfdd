"""Harmonic networks coupled to several baths at different temperatures.

The network Hamiltonian is H = P^T M^-1 P / 2 + X^T V X / 2; each bath
couples to its own subset of coordinates through a Lorentzian kernel and
(optionally) renormalizes the potential by lam^2/omega0^2 on those
coordinates, giving Vbar.

Steady covariances follow from the resolvent of the phase-space equations,

    (s I + Omega - K^(s)) z^(s) = z(0) + F^(s),
    Omega = [[0, -M^-1], [Vbar, 0]],

integrated against the force spectrum.  Heat currents come either from the
steady covariances, Q_alpha = tr[Pi_alpha Vbar C_xp M^-1], or from the
stochastic trajectories as <(F_alpha + u_alpha) . X'>.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .engine import EmbeddedModel, SimConfig, heat_from_samples, simulate_ensemble
from .exceptions import DomainError, QuadratureError, UnstableError
from .oracle import resonance_points
from .spectral import BathSpec, Lorentzian, OscillatorParams, eval_force_psd

__all__ = [
    "Attachment",
    "NetworkSpec",
    "Network",
    "NetworkSteadyState",
    "NetworkEnsembleResult",
    "build_network",
    "chain_spec",
    "network_steady_covariances",
    "heat_currents_opensystems",
    "run_network_ensemble",
    "write_heat_sweep_csv",
]


@dataclass(frozen=True)
class Attachment:
    """A bath coupled to the coordinates listed in ``coords``."""

    coords: tuple
    bath: BathSpec

    def projector(self, n):
        pi = np.zeros((n, n))
        for c in self.coords:
            pi[c, c] = 1.0
        return pi


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    mass_matrix: np.ndarray
    potential_matrix: np.ndarray
    attachments: tuple
    counter_term: bool = True

    @property
    def n_osc(self):
        return np.asarray(self.mass_matrix).shape[0]


def chain_spec(kappa, baths, mass=1.0, omega=1.0, counter_term=True):
    """Two oscillators joined by a spring, each coupled to its own bath.

    V = [[m W^2, -kappa], [-kappa, m W^2]]; ``baths`` is (hot, cold).
    """
    v = np.array([[mass * omega**2, -kappa], [-kappa, mass * omega**2]])
    m = mass * np.eye(2)
    return NetworkSpec(m, v, (Attachment((0,), baths[0]), Attachment((1,), baths[1])), counter_term)


@dataclass(frozen=True, eq=False)
class Network:
    spec: NetworkSpec
    model: EmbeddedModel
    baths: tuple

    @property
    def n(self):
        return self.model.n

    @property
    def vbar(self):
        return self.model.vbar

    @property
    def minv(self):
        return self.model.minv

    def poles(self):
        return self.model.eigenvalues()


def _is_symmetric(a):
    return np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, float(np.max(np.abs(a)))))


def build_network(spec: NetworkSpec, p: OscillatorParams | None = None) -> Network:
    """Validate the network and assemble its extended dynamics.

    ``p`` only supplies the counter-term default when given.
    """
    m = np.array(spec.mass_matrix, dtype=float)
    v = np.array(spec.potential_matrix, dtype=float)
    n = m.shape[0] if m.ndim == 2 else -1
    if m.shape != (n, n) or v.shape != (n, n) or n < 1:
        raise DomainError("mass and potential matrices must be square and of equal size")
    if not (_is_symmetric(m) and _is_symmetric(v)):
        raise DomainError("mass and potential matrices must be symmetric")
    if np.min(np.linalg.eigvalsh(m)) <= 0:
        raise DomainError("mass matrix must be positive definite")
    if not spec.attachments:
        raise DomainError("at least one bath attachment is required")
    seen = set()
    for a in spec.attachments:
        if not a.coords:
            raise DomainError("attachment without coordinates")
        if seen & set(a.coords):
            raise DomainError("attachments must couple disjoint oscillator subsets")
        seen |= set(a.coords)
    counter = spec.counter_term if p is None else p.counter_term
    model = EmbeddedModel.from_matrices(m, v, [(a.coords, a.bath.j) for a in spec.attachments],
                                        counter_term=counter)
    if np.min(np.linalg.eigvalsh(model.vbar)) <= 0:
        raise UnstableError("renormalized potential matrix is not positive definite")
    model.check_stable()
    return Network(spec, model, tuple(a.bath for a in spec.attachments))


@dataclass(frozen=True, eq=False)
class NetworkSteadyState:
    c_xx: np.ndarray
    c_xp: np.ndarray
    c_pp: np.ndarray
    heat_currents: np.ndarray | None = None


def _resolvent(net: Network, w):
    n = net.n
    a = np.zeros((2 * n, 2 * n), dtype=complex)
    a[:n, :n] = 1j * w * np.eye(n)
    a[n:, n:] = 1j * w * np.eye(n)
    a[:n, n:] = -net.minv
    a[n:, :n] = net.vbar
    for k, c in enumerate(net.model.attached):
        a[n + c, c] -= net.model.kernels[k].laplace(1j * w)
    return np.linalg.inv(a)


def _force_psd_matrix(net: Network, w):
    n = net.n
    diag = np.zeros(2 * n)
    for k, c in enumerate(net.model.attached):
        bath = net.baths[net.model.bath_of[k]]
        diag[n + c] = float(eval_force_psd(bath, w))
    return diag


def network_steady_covariances(net: Network, epsrel=1e-10) -> NetworkSteadyState:
    """C = (1/pi) int_0^inf Re[G(i w) P_F(w) G(i w)^H] dw, split into blocks."""
    n = net.n
    if all(b.j.is_zero for b in net.baths):
        raise DomainError("steady state requires at least one coupled bath")
    ev = net.poles()
    pts = resonance_points(ev)
    pts |= {k.omega0 for k in net.model.kernels}
    pts = sorted(pt for pt in pts if pt > 0)

    def integrand(theta):
        w = math.tan(theta)
        if w == 0.0:
            return np.zeros((2 * n, 2 * n))
        g = _resolvent(net, w)
        pd = _force_psd_matrix(net, w)
        return np.real((g * pd) @ g.conj().T) / math.cos(theta) ** 2

    scale = max(1.0, max(b.temperature for b in net.baths))
    val, err = integrate.quad_vec(integrand, 0.0, 0.5 * math.pi, epsrel=epsrel,
                                  epsabs=1e-14 * scale, points=[math.atan(w) for w in pts],
                                  limit=20000)
    if not np.all(np.isfinite(val)):
        raise QuadratureError("network covariance integral failed", float(err), epsrel)
    c = val / math.pi
    c = 0.5 * (c + c.T)
    return NetworkSteadyState(c[:n, :n], c[:n, n:], c[n:, n:])


def heat_currents_opensystems(net: Network, steady: NetworkSteadyState) -> np.ndarray:
    """Q_alpha = tr[Pi_alpha Vbar C_xp M^-1] for each bath (positive into the network)."""
    out = []
    for a in net.spec.attachments:
        pi = a.projector(net.n)
        out.append(float(np.trace(pi @ net.vbar @ steady.c_xp @ net.minv)))
    return np.array(out)


@dataclass(frozen=True, eq=False)
class NetworkEnsembleResult:
    """Moment matrices over time and stochastic heat currents per bath."""

    t: np.ndarray
    mu_x: np.ndarray
    mu_p: np.ndarray
    c_xx: np.ndarray
    c_xp: np.ndarray
    c_pp: np.ndarray
    heat: tuple
    balance: float
    balance_se: float
    n_traj: int
    raw: object = field(default=None, repr=False)


def run_network_ensemble(net: Network, cfg: SimConfig) -> NetworkEnsembleResult:
    """Stochastic trajectories of the whole network with per-bath noise."""
    out = simulate_ensemble(net.model, list(net.baths), cfg)
    t = cfg.dt * cfg.record_steps
    n = cfg.n_traj
    mx, mp = out.x.mean(axis=0), out.p.mean(axis=0)
    if n > 1:
        dx, dp = out.x - mx, out.p - mp
        c = 1.0 / (n - 1)
        cxx = c * np.einsum("bti,btj->tij", dx, dx)
        cxp = c * np.einsum("bti,btj->tij", dx, dp)
        cpp = c * np.einsum("bti,btj->tij", dp, dp)
    else:
        cxx = cxp = cpp = np.zeros((t.size, net.n, net.n))
    heat = tuple(heat_from_samples(t, out, k, run_window=cfg.heat_window)
                 for k in range(net.model.n_baths))
    total = out.q_window.sum(axis=1)
    bal_se = float(total.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return NetworkEnsembleResult(t, mx, mp, cxx, cxp, cpp, heat, float(total.mean()), bal_se, n, out)


def write_heat_sweep_csv(path, rows, header=()):
    """Columns ``T,Qdot_H,Qdot_C,se_H,se_C,method``; ``rows`` are tuples in that order."""
    with open(path, "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["T", "Qdot_H", "Qdot_C", "se_H", "se_C", "method"])
        for temp, qh, qc, sh, sc, method in rows:
            w.writerow([repr(float(temp)), repr(float(qh)), repr(float(qc)),
                        repr(float(sh)), repr(float(sc)), method])
