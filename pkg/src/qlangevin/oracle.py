"""Exact moments of the damped oscillator without any sampling.

Four independent routes to the steady state are provided so they can be
played against each other:

* frequency quadrature of |g2^(i w)|^2 weighted by the force spectrum,
* the Matsubara series (Lorentzian bath, quantum noise, T > 0),
* the mean-force Gibbs expressions with a numerically evaluated principal
  value integral,
* the bare Gibbs state (correct only at vanishing coupling).

For the Lorentzian bath the response functions are sums of four damped
exponentials whose rates are the roots of
m (s^2 + Wbar^2)(s^2 + gamma s + omega0^2) - lam^2, which gives the full
time dependence of the moments in closed form up to a single frequency
integral.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .exceptions import DegeneratePolesError, DomainError, QuadratureError, UnstableError
from .spectral import (
    BathSpec,
    Lorentzian,
    NoiseKind,
    OscillatorParams,
    SpectralDensity,
    eval_noise_spectrum,
    integrate_halfline,
    renormalized_frequency_sq,
)

__all__ = [
    "GFunctions",
    "MomentState",
    "SteadyCovariances",
    "g_functions",
    "mean_evolution",
    "covariance_evolution",
    "steady_covariances_quadrature",
    "steady_covariances_matsubara",
    "gibbs_covariances",
    "mean_force_covariances",
    "classical_thermal_covariances",
    "resonance_points",
    "write_dynamics_csv",
    "write_steady_csv",
]

ROOT_SEPARATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GFunctions:
    """Pole expansion g2(t) = sum_k r_k exp(p_k t).

    g1 = m g2' and g3 = m g1' follow by multiplying residues by m p_k.
    """

    poles: np.ndarray
    residues_g2: np.ndarray
    mass: float
    params: OscillatorParams
    j: Lorentzian

    def residues(self, which):
        r, p, m = self.residues_g2, self.poles, self.mass
        if which == 2:
            return r
        if which == 1:
            return m * r * p
        if which == 3:
            return m * m * r * p * p
        raise ValueError("which must be 1, 2 or 3")

    def _eval(self, which, t):
        t = np.asarray(t, dtype=float)
        res = self.residues(which)
        out = np.real(np.exp(np.multiply.outer(t, self.poles)) @ res)
        return float(out) if out.ndim == 0 else out

    def g1(self, t):
        return self._eval(1, t)

    def g2(self, t):
        return self._eval(2, t)

    def g3(self, t):
        return self._eval(3, t)

    def finite_transform(self, which, t, omega):
        """int_0^t g_which(u) exp(i omega u) du, shape (len(omega), len(t))."""
        res = self.residues(which)
        z = self.poles[None, :] + 1j * np.asarray(omega, dtype=float)[:, None]
        t = np.atleast_1d(np.asarray(t, dtype=float))
        # (exp(z t) - 1) / z, expm1 keeps small z t accurate
        ez = np.expm1(z[:, None, :] * t[None, :, None]) / z[:, None, :]
        return ez @ res

    def laplace_g2(self, s):
        s = np.asarray(s, dtype=complex)
        return np.sum(self.residues_g2 / (s[..., None] - self.poles), axis=-1)

    @property
    def slowest_rate(self):
        return float(-np.max(self.poles.real))


@dataclass(frozen=True, eq=False)
class MomentState:
    t: np.ndarray
    mu_x: np.ndarray
    mu_p: np.ndarray
    sigma_xx: np.ndarray
    sigma_xp: np.ndarray
    sigma_pp: np.ndarray

    @property
    def uncertainty(self):
        return self.sigma_xx * self.sigma_pp - self.sigma_xp**2


@dataclass(frozen=True)
class SteadyCovariances:
    sigma_xx: float
    sigma_pp: float
    method: str
    sigma_xp: float = 0.0

    @property
    def uncertainty(self):
        return self.sigma_xx * self.sigma_pp - self.sigma_xp**2


# ---------------------------------------------------------------------------
# g-functions


def _polish(coeffs, roots, iters=6):
    dcoeffs = np.polyder(coeffs)
    for _ in range(iters):
        f = np.polyval(coeffs, roots)
        df = np.polyval(dcoeffs, roots)
        step = np.where(df != 0, f / np.where(df != 0, df, 1), 0)
        roots = roots - step
    return roots


def _min_separation(coeffs, roots):
    """Smallest distance between roots, resolved below the root finder's noise.

    A double root splits numerically into a pair about sqrt(eps) apart.
    For close pairs the true separation is re-estimated from the local
    expansion q(mid) + q''(mid) d^2 / 8 = 0; a pair whose q(mid) is within
    rounding noise of zero cannot be told apart from a repeated root.
    """
    eps = np.finfo(float).eps
    d2 = np.polyder(coeffs, 2)
    best = math.inf
    for i, a in enumerate(roots):
        for b in roots[i + 1:]:
            sep = abs(a - b)
            if sep < 1e-5 * max(1.0, abs(a)):
                mid = 0.5 * (a + b)
                noise = 8 * eps * np.polyval(np.abs(coeffs), abs(mid))
                q, q2 = abs(np.polyval(coeffs, mid)), abs(np.polyval(d2, mid))
                if q2 > 0:
                    sep = 0.0 if q <= noise else min(sep, math.sqrt(8 * q / q2))
            best = min(best, sep)
    return best


def _characteristic(p: OscillatorParams, j: Lorentzian):
    m = p.mass
    wb2 = renormalized_frequency_sq(p, j)
    quartic = m * np.polymul([1.0, 0.0, wb2], [1.0, j.gamma, j.omega0**2])
    quartic[-1] -= j.lam**2
    numerator = np.array([1.0, j.gamma, j.omega0**2])
    return quartic, numerator


def g_functions(p: OscillatorParams, j: Lorentzian) -> GFunctions:
    """Poles and residues of g2^(s) = (s^2 + gamma s + omega0^2) / quartic."""
    if not isinstance(j, Lorentzian):
        raise TypeError("closed-form g-functions need a Lorentzian spectral density")
    quartic, numerator = _characteristic(p, j)
    roots = _polish(quartic, np.roots(quartic).astype(complex))
    scale = max(1.0, float(np.max(np.abs(roots))))
    sep = _min_separation(quartic, roots)
    if sep < ROOT_SEPARATION_TOL * scale:
        raise DegeneratePolesError(f"repeated poles (separation {sep:.2e})")
    # snap conjugate partners so that real-valued g's come out real
    roots = np.array(sorted(roots, key=lambda z: (round(z.real, 12), z.imag)))
    residues = np.polyval(numerator, roots) / np.polyval(np.polyder(quartic), roots)
    return GFunctions(roots, residues, p.mass, p, j)


def mean_evolution(g: GFunctions, mu0, t):
    """(mu_x(t), mu_p(t)) from initial means mu0 = (mu_x(0), mu_p(0))."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    mx0, mp0 = mu0
    g1, g2, g3 = g.g1(t), g.g2(t), g.g3(t)
    return g1 * mx0 + g2 * mp0, g3 * mx0 + g1 * mp0


def resonance_points(poles, widths=(0.0, 1.0, 10.0, 100.0)):
    """Break points at each oscillatory pole and a few half-widths around it.

    A narrow resonance is only found reliably by adaptive quadrature when
    the subdivision is told its location and scale.
    """
    pts = set()
    for z in np.asarray(poles):
        w0, hw = abs(float(z.imag)), abs(float(z.real))
        if w0 == 0.0:
            continue
        for k in widths:
            for w in (w0 - k * hw, w0 + k * hw):
                if w > 0:
                    pts.add(w)
    return pts


def _frequency_points(g: GFunctions):
    pts = {g.j.omega0, math.sqrt(renormalized_frequency_sq(g.params, g.j))}
    pts |= resonance_points(g.poles)
    return sorted(pts)


def covariance_evolution(g: GFunctions, b: BathSpec, sigma0, t, mu0=(0.0, 0.0),
                         epsrel=1e-9) -> MomentState:
    """Exact sigma_xx, sigma_xp, sigma_pp at times `t`.

    The initial-state part is G(t) Sigma(0) G(t)^T with
    G = [[g1, g2], [g3, g1]]; the bath part is one frequency integral per
    time with the inner time integrals done in closed form by
    :meth:`GFunctions.finite_transform`.  All times share one adaptive
    vector quadrature.
    """
    if b.j != g.j:
        raise ValueError("bath spectral density differs from the one used for g")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    sxx0, sxp0, spp0 = sigma0
    m = g.mass
    g1, g2, g3 = g.g1(t), g.g2(t), g.g3(t)
    hxx = g1 * g1 * sxx0 + 2 * g1 * g2 * sxp0 + g2 * g2 * spp0
    hxp = g1 * g3 * sxx0 + (g1 * g1 + g2 * g3) * sxp0 + g1 * g2 * spp0
    hpp = g3 * g3 * sxx0 + 2 * g1 * g3 * sxp0 + g1 * g1 * spp0

    def integrand(theta):
        w = math.tan(theta)
        jac = 1.0 / math.cos(theta) ** 2
        weight = float(b.j.j_over_omega(w)) * float(eval_noise_spectrum(b.kind, w, b.temperature)) * jac
        a2 = g.finite_transform(2, t, [w])[0]
        a1 = g.finite_transform(1, t, [w])[0]
        return weight * np.stack([np.abs(a2) ** 2,
                                  m * np.real(np.conj(a2) * a1),
                                  m * m * np.abs(a1) ** 2])

    if b.j.is_zero:
        noise = np.zeros((3, t.size))
    else:
        pts = [math.atan(w) for w in _frequency_points(g)]
        scale = max(1.0, b.temperature)
        noise, err = integrate.quad_vec(integrand, 0.0, 0.5 * math.pi, epsrel=epsrel,
                                        epsabs=1e-13 * scale, points=pts, limit=20000)
        if not np.all(np.isfinite(noise)):
            raise QuadratureError("covariance integral failed", float(err), epsrel)
    mu_x, mu_p = mean_evolution(g, mu0, t)
    return MomentState(t, mu_x, mu_p, noise[0] + hxx, noise[1] + hxp, noise[2] + hpp)


# ---------------------------------------------------------------------------
# steady state


def _kernel_on_axis(j: SpectralDensity, w):
    """K^(i w) for w >= 0."""
    if isinstance(j, Lorentzian):
        return j.laplace(1j * w)
    return complex(j.pv_kernel(w), -math.pi * float(j(w)))


def _check_stable(p: OscillatorParams, j: SpectralDensity):
    if isinstance(j, Lorentzian):
        g = g_functions(p, j) if j.lam > 0 else None
        if g is not None and np.any(g.poles.real >= 0):
            raise UnstableError("poles in the closed right half plane")
    static = p.mass * renormalized_frequency_sq(p, j) - j.reorganization()
    if static <= 0:
        raise UnstableError("effective static stiffness is not positive")


def steady_covariances_quadrature(p: OscillatorParams, b: BathSpec, epsrel=1e-12) -> SteadyCovariances:
    """sigma(inf) = int (J/w) N |g2^(i w)|^2 dw and its momentum analogue."""
    _check_stable(p, b.j)
    m = p.mass
    wb2 = renormalized_frequency_sq(p, b.j)
    if b.j.is_zero:
        raise DomainError("steady state requires a coupled bath")

    def g2sq(w):
        return 1.0 / abs(m * (wb2 - w * w) - _kernel_on_axis(b.j, w)) ** 2

    def weight(w):
        return float(b.j.j_over_omega(w)) * float(eval_noise_spectrum(b.kind, w, b.temperature))

    pts = set(b.j.breakpoints()) | {math.sqrt(wb2)}
    if isinstance(b.j, Lorentzian):
        g = g_functions(p, b.j)
        pts |= resonance_points(g.poles)
    pts = sorted(pts)
    sxx = integrate_halfline(lambda w: weight(w) * g2sq(w), points=pts, epsrel=epsrel)
    spp = m * m * integrate_halfline(lambda w: w * w * weight(w) * g2sq(w), points=pts, epsrel=epsrel)
    return SteadyCovariances(sxx, spp, "quadrature")


def _series_with_tail(term, n_min=64, n_max=1 << 22, rtol=1e-12):
    """sum_{n>=1} term(n) for terms decaying like n^-2.

    Terms are summed until the last one falls below `rtol` times the
    partial sum, or n_max is reached; the remainder is estimated from a
    c2/n^2 + c4/n^4 fit through the last two blocks.
    """
    total = 0.0
    start, stop = 1, n_min
    while True:
        n = np.arange(start, stop + 1, dtype=float)
        vals = term(n)
        total += math.fsum(vals)
        last = abs(vals[-1])
        if last < rtol * abs(total) or stop >= n_max:
            break
        start, stop = stop + 1, 2 * stop
    big_n = float(stop)
    half_n = float(stop // 2)
    t_big, t_half = float(term(np.array([big_n]))[0]), float(term(np.array([half_n]))[0])
    # solve c2/N^2 + c4/N^4 = t(N) at N and N/2
    a = np.array([[big_n**-2, big_n**-4], [half_n**-2, half_n**-4]])
    c2, c4 = np.linalg.solve(a, [t_big, t_half])
    tail = c2 * special.polygamma(1, big_n + 1) + c4 * special.polygamma(3, big_n + 1) / 6.0
    return total + float(tail)


def steady_covariances_matsubara(p: OscillatorParams, j: Lorentzian, temperature) -> SteadyCovariances:
    """Matsubara-series steady state for a Lorentzian bath and quantum noise.

    sigma_xx = T sum_{n in Z} g2^(|nu_n|),
    sigma_pp = T sum_{n in Z} m (m Wbar^2 - K^(|nu_n|)) g2^(|nu_n|),
    nu_n = 2 pi T n.  For m = omega = 1 with counter-term these reduce term
    by term to the familiar rational series in nu_n.
    """
    if not isinstance(j, Lorentzian):
        raise TypeError("Matsubara route needs a Lorentzian spectral density")
    if not temperature > 0:
        raise DomainError("Matsubara series requires T > 0")
    _check_stable(p, j)
    m = p.mass
    wb2 = renormalized_frequency_sq(p, j)
    lam2, gam, w02 = j.lam**2, j.gamma, j.omega0**2

    def kern(nu):
        return lam2 / (nu * nu + gam * nu + w02)

    def g2(nu):
        return 1.0 / (m * (nu * nu + wb2) - kern(nu))

    def xx_term(n):
        nu = 2 * math.pi * temperature * n
        return 2 * temperature * g2(nu)

    def pp_term(n):
        nu = 2 * math.pi * temperature * n
        return 2 * temperature * m * (m * wb2 - kern(nu)) * g2(nu)

    zero = np.array([0.0])
    sxx = temperature * float(g2(zero)[0]) + _series_with_tail(xx_term)
    spp = temperature * float(m * (m * wb2 - kern(zero)[0]) * g2(zero)[0]) + _series_with_tail(pp_term)
    return SteadyCovariances(sxx, spp, "matsubara")


def gibbs_covariances(p: OscillatorParams, temperature) -> SteadyCovariances:
    """Thermal state of the bare oscillator Hamiltonian."""
    if temperature < 0:
        raise DomainError("temperature must be >= 0")
    w, m = p.omega, p.mass
    c = 1.0 if temperature == 0 else 1.0 / math.tanh(w / (2 * temperature))
    return SteadyCovariances(c / (2 * m * w), c * m * w / 2, "gibbs")


def classical_thermal_covariances(p: OscillatorParams, j: SpectralDensity, temperature) -> SteadyCovariances:
    """Classical Boltzmann state of the oscillator in the bath's static potential.

    With the counter-term the static frequency is the bare one; without it
    the reorganization shifts omega^2 down by K^(0)/m.
    """
    w2 = p.omega**2 if p.counter_term else p.omega**2 - j.reorganization() / p.mass
    if w2 <= 0:
        raise UnstableError("shifted frequency is imaginary")
    return SteadyCovariances(temperature / (p.mass * w2), p.mass * temperature, "classical_exact")


def mean_force_covariances(p: OscillatorParams, j: SpectralDensity, temperature,
                           pv="numeric", epsrel=1e-8) -> SteadyCovariances:
    """Mean-force Gibbs covariances from the response G(w).

    G(w) = -1 / (m w^2 - Wbar^2 [m - chi(w)]) with
    Wbar^2 chi(w) = P int 2 xi J(xi) / (xi^2 - w^2) dxi + i pi J(w).
    ``pv="numeric"`` evaluates the principal value by symmetric folding
    about xi = w; ``pv="closed"`` uses the Lorentzian closed form.
    """
    if temperature < 0:
        raise DomainError("temperature must be >= 0")
    _check_stable(p, j)
    m = p.mass
    wb2 = renormalized_frequency_sq(p, j)
    if pv == "numeric":
        def principal(w):
            return j.pv_kernel_numeric(w, epsrel=epsrel)
    elif pv == "closed":
        principal = j.pv_kernel
    else:
        raise ValueError("pv must be 'numeric' or 'closed'")

    def im_g(w):
        chi_wb2 = complex(principal(w), math.pi * float(j(w)))
        # Wbar^2 (m - chi) = m Wbar^2 - Wbar^2 chi
        gw = -1.0 / (m * w * w - (m * wb2 - chi_wb2))
        return gw.imag

    def integrand(theta):
        # both covariances in one pass so the PV integral is done once per node
        w = math.tan(theta)
        if w == 0.0:
            return np.zeros(2)
        n_q = float(eval_noise_spectrum(NoiseKind.QUANTUM, w, temperature))
        a = n_q * im_g(w) / math.cos(theta) ** 2
        # Im G / w stays finite as w -> 0 because Im G ~ pi J(w)
        return np.array([a / w, m * m * w * a])

    pts = sorted(set(j.breakpoints()) | {math.sqrt(wb2)} | (
        resonance_points(g_functions(p, j).poles)
        if isinstance(j, Lorentzian) and j.lam > 0 else set()))
    val, err = integrate.quad_vec(integrand, 0.0, 0.5 * math.pi, epsrel=epsrel,
                                  points=[math.atan(w) for w in pts], limit=5000)
    if not np.all(np.isfinite(val)) or err > 1e3 * epsrel * np.max(np.abs(val)):
        raise QuadratureError("mean-force integral failed", float(err), epsrel)
    sxx, spp = val / math.pi
    return SteadyCovariances(sxx, spp, "mean_force")


def write_dynamics_csv(path, state: MomentState, header=()):
    """Columns ``t,sigma_xx,sigma_xp,sigma_pp``."""
    rows = np.column_stack([state.t, state.sigma_xx, state.sigma_xp, state.sigma_pp])
    _write_rows(path, ["t", "sigma_xx", "sigma_xp", "sigma_pp"], rows, header)


def write_steady_csv(path, temperatures, results, header=()):
    """Columns ``T,sigma_xx,sigma_pp,method``; one row per (T, result)."""
    with open(path, "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["T", "sigma_xx", "sigma_pp", "method"])
        for temp, r in zip(temperatures, results):
            w.writerow([repr(float(temp)), repr(float(r.sigma_xx)), repr(float(r.sigma_pp)), r.method])


def _write_rows(path, columns, rows, header):
    with open(path, "w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])
