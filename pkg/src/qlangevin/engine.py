"""Stochastic trajectories of the quasiclassical Langevin equation.

The Lorentzian memory integral u(t) = int_0^t K(t - s) x(s) ds is replaced
by the auxiliary oscillator

    u'' + gamma u' + omega0^2 u = lam^2 x,   u(0) = u'(0) = 0,

which reproduces it exactly because K(0) = 0, K'(0) = lam^2 and K obeys
the homogeneous version of the same equation.  The extended system is
linear with a smooth, band-limited drive, so it is stepped with classic
fourth-order Runge-Kutta.  The colored force is synthesized on a grid of
half the step size so that the midpoint stages see exact samples of the
same Gaussian process rather than interpolated values.

The same core serves a single oscillator and networks of n coordinates;
the single-oscillator entry points are thin wrappers around a one-node
network, so the two agree bit for bit.

A direct convolution integrator (velocity Verlet with a trapezoid memory
sum, O(N^2)) is kept as an independent check on the embedding.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import DomainError, StepSizeError, UnstableError
from .noise import derive_rng, synthesize_batch
from .spectral import BathSpec, Lorentzian, OscillatorParams, eval_force_psd

__all__ = [
    "SimConfig",
    "EmbeddedModel",
    "TrajectoryResult",
    "EnsembleStats",
    "HeatCurrent",
    "build_embedding",
    "integrate_trajectory",
    "run_ensemble",
    "heat_current_trace",
    "default_threads",
    "write_ensemble_csv",
    "write_heat_csv",
]

THREADS_ENV = "QLANGEVIN_THREADS"
CHANNEL_INITIAL = 0


def default_threads():
    """Thread count from the environment, else the CPU count."""
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise DomainError(f"{THREADS_ENV} must be an integer") from exc
        if n < 1:
            raise DomainError(f"{THREADS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SimConfig:
    """Run parameters for an ensemble of trajectories.

    ``sigma0`` is (sigma_xx, sigma_xp, sigma_pp) of the Gaussian initial
    state, applied independently to every coordinate of a network.
    ``record_every`` thins the stored time grid; heat-current window
    averages use every step regardless.
    """

    dt: float
    t_final: float
    n_traj: int
    master_seed: int
    mu0: tuple = (0.0, 0.0)
    sigma0: tuple = (0.5, 0.0, 0.5)
    integrator: str = "embedded"
    record_every: int = 1
    noise: bool = True
    pad_factor: int = 4
    heat_window: float = 0.25
    threads: int | None = None
    chunk_size: int = 500

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError("dt must be > 0")
        if not self.t_final >= 0:
            raise DomainError("t_final must be >= 0")
        if 0 < self.t_final < self.dt:
            raise DomainError("t_final must be 0 or >= dt")
        n = self.t_final / self.dt
        if abs(n - round(n)) > 1e-9 * max(1.0, n):
            raise DomainError("t_final must be an integer multiple of dt")
        if self.n_traj < 1:
            raise DomainError("n_traj must be >= 1")
        if self.master_seed < 0:
            raise DomainError("master_seed must be nonnegative")
        if self.integrator not in ("embedded", "convolution"):
            raise DomainError("integrator must be 'embedded' or 'convolution'")
        if self.record_every < 1 or self.pad_factor < 1 or self.chunk_size < 1:
            raise DomainError("record_every, pad_factor and chunk_size must be >= 1")
        if not 0 < self.heat_window <= 1:
            raise DomainError("heat_window must lie in (0, 1]")
        sxx, sxp, spp = self.sigma0
        if sxx < 0 or spp < 0 or sxx * spp - sxp * sxp < -1e-15:
            raise DomainError("initial covariance matrix must be positive semidefinite")
        if self.threads is not None and self.threads < 1:
            raise DomainError("threads must be >= 1")

    @property
    def n_steps(self):
        return int(round(self.t_final / self.dt))

    @property
    def record_steps(self):
        steps = list(range(0, self.n_steps + 1, self.record_every))
        if steps[-1] != self.n_steps:
            steps.append(self.n_steps)
        return np.array(steps)

    @property
    def window_start(self):
        """First step index inside the heat-current averaging window."""
        return int(math.ceil((1.0 - self.heat_window) * self.n_steps - 1e-9))


@dataclass(frozen=True, eq=False)
class EmbeddedModel:
    """Linear extended dynamics for n coordinates and their bath oscillators.

    x' = M^-1 p
    p' = -Vbar x + S (u + F)
    u'' = -gamma u' - omega0^2 u + lam^2 S^T x

    S scatters the attached entries into the n coordinates.  ``bath_of``
    gives the bath index for each attached coordinate.
    """

    minv: np.ndarray
    vbar: np.ndarray
    attached: np.ndarray
    bath_of: np.ndarray
    kernels: tuple
    n_baths: int

    @property
    def n(self):
        return self.minv.shape[0]

    @property
    def lam2(self):
        return np.array([k.lam**2 for k in self.kernels])

    @property
    def gamma(self):
        return np.array([k.gamma for k in self.kernels])

    @property
    def w02(self):
        return np.array([k.omega0**2 for k in self.kernels])

    @classmethod
    def from_matrices(cls, mass_matrix, potential_matrix, attachments, counter_term=True):
        """Assemble the model.

        ``attachments`` is a list with one entry per bath: (coordinate
        indices, Lorentzian).  With ``counter_term`` the static shift
        lam^2/omega0^2 is added to the diagonal of each attached coordinate.
        """
        m = np.array(mass_matrix, dtype=float)
        v = np.array(potential_matrix, dtype=float)
        n = m.shape[0]
        att, bath_of, kernels = [], [], []
        for b, (coords, j) in enumerate(attachments):
            if not isinstance(j, Lorentzian):
                raise TypeError("the Markovian embedding needs a Lorentzian spectral density")
            for c in coords:
                att.append(int(c))
                bath_of.append(b)
                kernels.append(j)
        if len(set(att)) != len(att):
            raise DomainError("baths must attach to disjoint coordinates")
        if any(not 0 <= c < n for c in att):
            raise DomainError("attachment index out of range")
        vbar = v.copy()
        if counter_term:
            for c, j in zip(att, kernels):
                vbar[c, c] += j.lam**2 / j.omega0**2
        return cls(np.linalg.inv(m), vbar, np.array(att, dtype=int),
                   np.array(bath_of, dtype=int), tuple(kernels), len(attachments))

    def drift_matrix(self):
        """Drift of the state (x, p, u, u') as a dense matrix."""
        n, na = self.n, len(self.attached)
        d = 2 * n + 2 * na
        a = np.zeros((d, d))
        a[:n, n:2 * n] = self.minv
        a[n:2 * n, :n] = -self.vbar
        for k, c in enumerate(self.attached):
            iu, iv = 2 * n + k, 2 * n + na + k
            a[n + c, iu] = 1.0
            a[iu, iv] = 1.0
            a[iv, iu] = -self.w02[k]
            a[iv, iv] = -self.gamma[k]
            a[iv, c] = self.lam2[k]
        return a

    def eigenvalues(self):
        return np.linalg.eigvals(self.drift_matrix())

    def max_frequency(self):
        ev = self.eigenvalues()
        freqs = [float(np.max(np.abs(ev.imag))) if ev.size else 0.0]
        freqs += [k.omega0 for k in self.kernels]
        w2 = np.linalg.eigvals(self.minv @ self.vbar).real
        freqs.append(math.sqrt(max(float(np.max(w2)), 0.0)))
        return max(freqs)

    def check_stable(self):
        ev = self.eigenvalues()
        if ev.size and np.max(ev.real) >= 0:
            raise UnstableError(f"drift matrix has eigenvalue with real part {np.max(ev.real):.3g} >= 0")

    def check_step(self, dt):
        wmax = self.max_frequency()
        if wmax > 0 and dt > 0.1 * 2 * math.pi / wmax:
            raise StepSizeError(
                f"dt = {dt:g} does not resolve the fastest frequency {wmax:.4g}; "
                f"use dt <= {0.1 * 2 * math.pi / wmax:.4g}")


def build_embedding(p: OscillatorParams, j: Lorentzian) -> EmbeddedModel:
    """Extended ODE for one oscillator: x' = p/m, p' = -m Wbar^2 x + u + F."""
    if not isinstance(j, Lorentzian):
        raise TypeError("the Markovian embedding needs a Lorentzian spectral density")
    return EmbeddedModel.from_matrices([[p.mass]], [[p.mass * p.omega**2]], [([0], j)],
                                       counter_term=p.counter_term)


# ---------------------------------------------------------------------------
# integration core


@dataclass(frozen=True, eq=False)
class _ChunkOutput:
    x: np.ndarray          # (B, n_rec, n)
    p: np.ndarray          # (B, n_rec, n)
    qdot: np.ndarray       # (B, n_rec, n_baths)
    q_window: np.ndarray   # (B, n_baths)
    force: np.ndarray | None = None   # (B, n_rec, n_att)
    u: np.ndarray | None = None
    v: np.ndarray | None = None


def _cholesky2(sigma0):
    sxx, sxp, spp = sigma0
    w, vec = np.linalg.eigh(np.array([[sxx, sxp], [sxp, spp]], dtype=float))
    return vec * np.sqrt(np.clip(w, 0.0, None))


def _initial_state(model, cfg, traj):
    rng = derive_rng(cfg.master_seed, int(traj), CHANNEL_INITIAL)
    z = rng.standard_normal((2, model.n))
    lmat = _cholesky2(cfg.sigma0)
    xp = np.asarray(cfg.mu0, dtype=float)[:, None] + lmat @ z
    return xp[0], xp[1]


def _forces(model, baths, cfg, trajs, spacing, length):
    """Noise on the attached coordinates, shape (B, n_att, length)."""
    na = len(model.attached)
    out = np.zeros((len(trajs), na, length))
    if not cfg.noise or na == 0:
        return out
    n_syn = max(length, 2)
    for k, c in enumerate(model.attached):
        bath = baths[model.bath_of[k]]
        if bath.j.is_zero:
            continue
        rngs = [derive_rng(cfg.master_seed, int(t), 1 + int(c)) for t in trajs]
        out[:, k, :] = synthesize_batch(lambda w, b=bath: eval_force_psd(b, w), spacing,
                                        n_syn, rngs, cfg.pad_factor)[:, :length]
    return out


def _simulate_embedded(model, baths, cfg, trajs, keep_drive, drive=None):
    n, att = model.n, model.attached
    dt, steps = cfg.dt, cfg.n_steps
    minv, vbar = model.minv, model.vbar
    lam2, gam, w02 = model.lam2, model.gamma, model.w02
    memb = np.zeros((len(att), model.n_baths))
    memb[np.arange(len(att)), model.bath_of] = 1.0

    b = len(trajs)
    x = np.empty((b, n))
    p = np.empty((b, n))
    for i, t in enumerate(trajs):
        x[i], p[i] = _initial_state(model, cfg, t)
    u = np.zeros((b, len(att)))
    v = np.zeros((b, len(att)))
    force = _forces(model, baths, cfg, trajs, 0.5 * dt, 2 * steps + 1) if drive is None else drive

    rec = cfg.record_steps
    n_rec = rec.size
    xs, ps = np.empty((b, n_rec, n)), np.empty((b, n_rec, n))
    qs = np.empty((b, n_rec, model.n_baths))
    fs = np.empty((b, n_rec, len(att))) if keep_drive else None
    us = np.empty_like(fs) if keep_drive else None
    vs = np.empty_like(fs) if keep_drive else None
    q_acc = np.zeros((b, model.n_baths))
    start = cfg.window_start

    def deriv(x, p, u, v, f):
        dx = p @ minv.T
        dp = -(x @ vbar.T)
        dp[:, att] += u + f
        dv = -gam * v - w02 * u + lam2 * x[:, att]
        return dx, dp, v, dv

    def power(x, p, u, f):
        xdot = p @ minv.T
        return ((u + f) * xdot[:, att]) @ memb

    r = 0
    for k in range(steps + 1):
        f0 = force[:, :, 2 * k]
        if k >= start:
            q_acc += power(x, p, u, f0)
        if r < n_rec and rec[r] == k:
            xs[:, r], ps[:, r] = x, p
            qs[:, r] = power(x, p, u, f0)
            if keep_drive:
                fs[:, r], us[:, r], vs[:, r] = f0, u, v
            r += 1
        if k == steps:
            break
        fh, f1 = force[:, :, 2 * k + 1], force[:, :, 2 * k + 2]
        k1 = deriv(x, p, u, v, f0)
        k2 = deriv(x + 0.5 * dt * k1[0], p + 0.5 * dt * k1[1], u + 0.5 * dt * k1[2], v + 0.5 * dt * k1[3], fh)
        k3 = deriv(x + 0.5 * dt * k2[0], p + 0.5 * dt * k2[1], u + 0.5 * dt * k2[2], v + 0.5 * dt * k2[3], fh)
        k4 = deriv(x + dt * k3[0], p + dt * k3[1], u + dt * k3[2], v + dt * k3[3], f1)
        x = x + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        p = p + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        u = u + dt / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        v = v + dt / 6.0 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
    q_window = q_acc / (steps + 1 - start)
    return _ChunkOutput(xs, ps, qs, q_window, fs, us, vs)


def _simulate_convolution(model, baths, cfg, trajs, keep_drive, drive=None):
    n, att = model.n, model.attached
    na = len(att)
    dt, steps = cfg.dt, cfg.n_steps
    minv, vbar = model.minv, model.vbar
    memb = np.zeros((na, model.n_baths))
    memb[np.arange(na), model.bath_of] = 1.0
    tau = dt * np.arange(steps + 1)
    kern = np.stack([j.kernel_time(tau) for j in model.kernels]) if na else np.zeros((0, steps + 1))

    b = len(trajs)
    x = np.empty((b, n))
    p = np.empty((b, n))
    for i, t in enumerate(trajs):
        x[i], p[i] = _initial_state(model, cfg, t)
    # same half-step grid as the embedded integrator, so the drives coincide
    if drive is None:
        drive = _forces(model, baths, cfg, trajs, 0.5 * dt, 2 * steps + 1)
    force = drive[:, :, ::2]
    hist = np.empty((b, steps + 1, na))
    hist[:, 0] = x[:, att]

    def memory(k):
        # trapezoid rule; the k-th node carries K(0) = 0
        if k == 0:
            return np.zeros((b, na))
        w = kern[:, k:0:-1].T.copy()     # K((k - i) dt) for i = 0..k-1
        w[0] *= 0.5
        return dt * np.einsum("bia,ia->ba", hist[:, :k], w)

    rec = cfg.record_steps
    n_rec = rec.size
    xs, ps = np.empty((b, n_rec, n)), np.empty((b, n_rec, n))
    qs = np.empty((b, n_rec, model.n_baths))
    fs = np.empty((b, n_rec, na)) if keep_drive else None
    us = np.empty_like(fs) if keep_drive else None
    q_acc = np.zeros((b, model.n_baths))
    start = cfg.window_start

    def accel(x, u, f):
        a = -(x @ vbar.T)
        a[:, att] += u + f
        return a

    u = memory(0)
    r = 0
    for k in range(steps + 1):
        f0 = force[:, :, k]
        qk = ((u + f0) * (p @ minv.T)[:, att]) @ memb
        if k >= start:
            q_acc += qk
        if r < n_rec and rec[r] == k:
            xs[:, r], ps[:, r], qs[:, r] = x, p, qk
            if keep_drive:
                fs[:, r], us[:, r] = f0, u
            r += 1
        if k == steps:
            break
        p_half = p + 0.5 * dt * accel(x, u, f0)
        x = x + dt * (p_half @ minv.T)
        hist[:, k + 1] = x[:, att]
        u = memory(k + 1)
        p = p_half + 0.5 * dt * accel(x, u, force[:, :, k + 1])
    q_window = q_acc / (steps + 1 - start)
    return _ChunkOutput(xs, ps, qs, q_window, fs, us, None)


def _simulate(model, baths, cfg, trajs, keep_drive=False, drive=None):
    if cfg.integrator == "embedded":
        return _simulate_embedded(model, baths, cfg, trajs, keep_drive, drive)
    return _simulate_convolution(model, baths, cfg, trajs, keep_drive, drive)


def _validate_run(model, baths, cfg):
    if len(baths) != model.n_baths:
        raise DomainError("one BathSpec per attachment is required")
    for bath, j in zip(baths, _bath_kernels(model)):
        if bath.j != j:
            raise DomainError("bath spectral density differs from the embedded kernel")
    model.check_step(cfg.dt)


def _bath_kernels(model):
    out = [None] * model.n_baths
    for k, bi in enumerate(model.bath_of):
        out[bi] = model.kernels[k]
    return out


def simulate_ensemble(model, baths, cfg):
    """Run all trajectories in fixed chunks, possibly on several threads.

    Each trajectory draws from its own seed substreams and is stored at
    its own index, so the result does not depend on scheduling.
    """
    _validate_run(model, baths, cfg)
    trajs = np.arange(cfg.n_traj)
    chunks = [trajs[i:i + cfg.chunk_size] for i in range(0, cfg.n_traj, cfg.chunk_size)]
    threads = cfg.threads or default_threads()
    if threads == 1 or len(chunks) == 1:
        parts = [_simulate(model, baths, cfg, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=min(threads, len(chunks))) as pool:
            parts = list(pool.map(lambda c: _simulate(model, baths, cfg, c), chunks))
    return _ChunkOutput(
        np.concatenate([q.x for q in parts]), np.concatenate([q.p for q in parts]),
        np.concatenate([q.qdot for q in parts]), np.concatenate([q.q_window for q in parts]))


# ---------------------------------------------------------------------------
# single-oscillator API


@dataclass(frozen=True, eq=False)
class TrajectoryResult:
    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    force: np.ndarray
    u: np.ndarray
    u_dot: np.ndarray | None
    traj_index: int


def integrate_trajectory(cfg: SimConfig, p: OscillatorParams, b: BathSpec, traj_index: int,
                         force=None) -> TrajectoryResult:
    """One trajectory sampled at the recorded steps; deterministic in the seeds.

    ``force`` optionally replaces the synthesized noise by a given drive
    sampled every dt/2 (2 n_steps + 1 values); the initial state is still
    drawn from the trajectory's substream.
    """
    model = build_embedding(p, b.j)
    _validate_run(model, [b], cfg)
    drive = None
    if force is not None:
        force = np.asarray(force, dtype=float)
        if force.shape != (2 * cfg.n_steps + 1,):
            raise DomainError("force must hold 2 n_steps + 1 samples spaced dt/2")
        drive = force[None, None, :]
    out = _simulate(model, [b], cfg, np.array([traj_index]), keep_drive=True, drive=drive)
    t = cfg.dt * cfg.record_steps
    return TrajectoryResult(t, out.x[0, :, 0], out.p[0, :, 0], out.force[0, :, 0], out.u[0, :, 0],
                            None if out.v is None else out.v[0, :, 0], int(traj_index))


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """Ensemble moments on the recorded grid with their standard errors."""

    t: np.ndarray
    mu_x: np.ndarray
    mu_p: np.ndarray
    sigma_xx: np.ndarray
    sigma_xp: np.ndarray
    sigma_pp: np.ndarray
    se_mu_x: np.ndarray
    se_mu_p: np.ndarray
    se_xx: np.ndarray
    se_xp: np.ndarray
    se_pp: np.ndarray
    uncertainty: np.ndarray
    se_uncertainty: np.ndarray
    n_traj: int
    degenerate: bool
    raw: object = field(default=None, repr=False)

    def __post_init__(self):
        if np.any(self.sigma_xx < 0) or np.any(self.sigma_pp < 0):
            raise AssertionError("negative variance")


def moment_stats(x, p):
    """Means, covariances and standard errors over axis 0.

    Covariances use the unbiased (n - 1) normalization; each standard error
    is the spread of the per-trajectory centered products over sqrt(n).  The
    uncertainty product's error comes from its influence function.
    """
    n = x.shape[0]
    mx, mp = x.mean(axis=0), p.mean(axis=0)
    if n == 1:
        z = np.zeros_like(mx)
        return dict(mu_x=mx, mu_p=mp, sigma_xx=z, sigma_xp=z.copy(), sigma_pp=z.copy(),
                    se_mu_x=z.copy(), se_mu_p=z.copy(), se_xx=z.copy(), se_xp=z.copy(),
                    se_pp=z.copy(), uncertainty=z.copy(), se_uncertainty=z.copy(), degenerate=True)
    dx, dp = x - mx, p - mp
    xx, xp, pp = dx * dx, dx * dp, dp * dp
    c = n / (n - 1)
    sxx, sxp, spp = c * xx.mean(axis=0), c * xp.mean(axis=0), c * pp.mean(axis=0)
    root = math.sqrt(n)
    unc = sxx * spp - sxp**2
    psi = spp * (xx - sxx) + sxx * (pp - spp) - 2 * sxp * (xp - sxp)
    return dict(mu_x=mx, mu_p=mp, sigma_xx=sxx, sigma_xp=sxp, sigma_pp=spp,
                se_mu_x=x.std(axis=0, ddof=1) / root, se_mu_p=p.std(axis=0, ddof=1) / root,
                se_xx=xx.std(axis=0, ddof=1) / root, se_xp=xp.std(axis=0, ddof=1) / root,
                se_pp=pp.std(axis=0, ddof=1) / root, uncertainty=unc,
                se_uncertainty=psi.std(axis=0, ddof=1) / root, degenerate=False)


def run_ensemble(cfg: SimConfig, p: OscillatorParams, b: BathSpec) -> EnsembleStats:
    """Independent trajectories reduced to moment time series."""
    model = build_embedding(p, b.j)
    out = simulate_ensemble(model, [b], cfg)
    stats = moment_stats(out.x[:, :, 0], out.p[:, :, 0])
    return EnsembleStats(cfg.dt * cfg.record_steps, n_traj=cfg.n_traj, raw=out, **stats)


@dataclass(frozen=True, eq=False)
class HeatCurrent:
    """Ensemble heat current from one bath into the system.

    ``steady`` is the time average over the final window of the run and
    ``steady_se`` the spread of the per-trajectory window averages; the
    trajectories are independent, so no autocorrelation correction is
    needed across them.
    """

    t: np.ndarray
    qdot: np.ndarray
    se: np.ndarray
    steady: float
    steady_se: float
    window: float


def heat_current_trace(result, bath_index=0, window=None, cfg=None) -> HeatCurrent:
    """Q(t) = <(F + u) . x'> for one bath from ensemble output.

    ``result`` is any ensemble result carrying ``t`` and ``raw``.  With
    ``window=None`` the steady value uses the per-step averages gathered
    during the run (window ``cfg.heat_window``); otherwise it is recomputed
    from the recorded samples over the final ``window`` fraction.
    """
    used = None if cfg is None else cfg.heat_window
    return heat_from_samples(result.t, result.raw, bath_index, window, used)


def heat_from_samples(t, raw, bath_index, window=None, run_window=None) -> HeatCurrent:
    q = raw.qdot[:, :, bath_index]
    n = q.shape[0]
    root = math.sqrt(n)
    mean = q.mean(axis=0)
    se = q.std(axis=0, ddof=1) / root if n > 1 else np.zeros_like(mean)
    if window is None:
        per_traj = raw.q_window[:, bath_index]
        used = float("nan") if run_window is None else run_window
    else:
        if not 0 < window <= 1:
            raise DomainError("window must lie in (0, 1] of the run length")
        mask = t >= (1.0 - window) * t[-1] - 1e-12
        per_traj = q[:, mask].mean(axis=1)
        used = window
    steady = float(per_traj.mean())
    steady_se = float(per_traj.std(ddof=1) / root) if n > 1 else 0.0
    return HeatCurrent(t, mean, se, steady, steady_se, used)


def write_ensemble_csv(path, stats: EnsembleStats, header=()):
    """Columns ``t,mu_x,mu_p,sigma_xx,sigma_xp,sigma_pp,se_xx,se_xp,se_pp``."""
    cols = ["t", "mu_x", "mu_p", "sigma_xx", "sigma_xp", "sigma_pp", "se_xx", "se_xp", "se_pp"]
    rows = np.column_stack([getattr(stats, c) for c in cols])
    _write(path, cols, rows, header)


def write_heat_csv(path, current: HeatCurrent, header=()):
    """Columns ``t,Qdot_alpha,se``."""
    _write(path, ["t", "Qdot_alpha", "se"], np.column_stack([current.t, current.qdot, current.se]), header)


def _write(path, cols, rows, header):
    with open(path, "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(cols)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def with_overrides(cfg: SimConfig, **kw) -> SimConfig:
    return replace(cfg, **kw)
