"""Spectral densities, memory kernels and noise spectra.

Everything here works in units with hbar = k_B = 1.  Oscillator mass and bare
frequency are carried explicitly by :class:`OscillatorParams` and default to 1,
so the usual nondimensional convention is recovered by leaving them alone.

The spectral density J(w) fixes the bath completely:

* memory kernel       K(t)    = 2 theta(t) int_0^inf J(w) sin(w t) dw
* Laplace transform   K^(s)   = int_0^inf 2 w J(w) / (s^2 + w^2) dw
* reorganization      K^(0)   = 2 int_0^inf J(w) / w dw
* force spectrum      P_F(w)  = pi J(w) / w * N(w, T)

with N the quantum (w coth(w / 2T)) or classical (2T) noise spectrum.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .exceptions import DomainError, QuadratureError, SingularityError

__all__ = [
    "NoiseKind",
    "SpectralDensity",
    "Lorentzian",
    "OhmicExpCutoff",
    "Tabulated",
    "BathSpec",
    "OscillatorParams",
    "eval_spectral_density",
    "eval_memory_kernel_time",
    "eval_kernel_laplace",
    "eval_kernel_fourier",
    "renormalized_frequency_sq",
    "eval_noise_spectrum",
    "eval_force_psd",
    "force_autocorrelation",
    "integrate_halfline",
]


# ---------------------------------------------------------------------------
# quadrature helpers


def _quad(f, a, b, *, epsabs=0.0, epsrel=1e-11, limit=400, **kw):
    """scipy.integrate.quad that raises instead of warning."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, **kw)
        except integrate.IntegrationWarning as exc:
            # rerun quietly to report what was achieved
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                val, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, **kw)
            tol = max(epsabs, epsrel * abs(val))
            if err <= 10 * tol:
                return val, err
            raise QuadratureError(str(exc).splitlines()[0], err, tol) from None
    return val, err


def integrate_halfline(f, a=0.0, points=(), *, epsabs=0.0, epsrel=1e-11, limit=800):
    """Integrate a scalar function over [a, inf) with w = a + tan(theta).

    `points` are interior break points in the original variable; they are
    mapped to theta and handed to the adaptive integrator so that resonances
    sit on subinterval boundaries.
    """
    half_pi = 0.5 * math.pi

    def g(theta):
        w = a + math.tan(theta)
        c = math.cos(theta)
        return f(w) / (c * c)

    pts = sorted({math.atan(p - a) for p in points if p > a and np.isfinite(p)})
    pts = [p for p in pts if 0.0 < p < half_pi]
    val, _ = _quad(g, 0.0, half_pi, epsabs=epsabs, epsrel=epsrel, limit=limit,
                   points=pts or None)
    return val


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_nonnegative(omega, name="omega"):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0) or np.any(np.isnan(omega)):
        raise DomainError(f"{name} must be >= 0")
    return omega


# ---------------------------------------------------------------------------
# spectral densities


class SpectralDensity:
    """Base class: generic numerical routes built on top of ``__call__``.

    Subclasses provide ``__call__`` (J itself) and ``j_over_omega``; closed
    forms override the ``*_numeric`` defaults where available.  The numeric
    methods stay reachable under their own names so that closed forms can be
    checked against them.
    """

    def __call__(self, omega):
        raise NotImplementedError

    def j_over_omega(self, omega):
        raise NotImplementedError

    def breakpoints(self):
        """Characteristic frequencies used to split quadratures."""
        return ()

    def feature_width(self):
        """Narrowest spectral feature; ``None`` if there is none."""
        return None

    @property
    def is_zero(self):
        return False

    # -- reorganization energy -------------------------------------------
    def reorganization_numeric(self):
        return 2.0 * integrate_halfline(lambda w: float(self.j_over_omega(w)),
                                        points=self.breakpoints())

    def reorganization(self):
        """Return 2 int_0^inf J(w)/w dw, which equals K^(0)."""
        return self.reorganization_numeric()

    # -- memory kernel in time --------------------------------------------
    def kernel_time_numeric(self, tau):
        tau = float(tau)
        if tau <= 0.0 or self.is_zero:
            return 0.0
        val, _ = _quad(lambda w: float(self(w)), 0.0, np.inf, weight="sin", wvar=tau,
                       epsabs=1e-14, limlst=200)
        return 2.0 * val

    def kernel_time(self, tau):
        return self.kernel_time_numeric(tau)

    # -- principal value / real part of the Fourier transform ---------------
    def pv_kernel_numeric(self, omega, epsrel=1e-12):
        """P int_0^inf 2 xi J(xi) / (xi^2 - omega^2) dxi by symmetric folding.

        The singular point is enclosed in [0, 2 omega] and the integral over
        it is folded onto h = |xi - omega|, where it becomes regular:
        int_0^omega [f(omega + h) - f(omega - h)] / h dh with
        f(xi) = 2 xi J(xi) / (xi + omega).
        """
        omega = float(omega)
        if omega < 0:
            raise DomainError("omega must be >= 0")
        if omega == 0.0:
            return self.reorganization()

        def f(xi):
            return 2.0 * xi * float(self(xi)) / (xi + omega)

        def folded(h):
            return (f(omega + h) - f(omega - h)) / h

        inner_pts = sorted({abs(b - omega) for b in self.breakpoints()
                            if 0.0 < abs(b - omega) < omega})
        scale = max([omega] + [float(self(b)) * b for b in self.breakpoints()])
        near, _ = _quad(folded, 0.0, omega, points=inner_pts or None,
                        epsabs=1e-15 * scale, epsrel=epsrel)
        far = integrate_halfline(lambda xi: f(xi) / (xi - omega), a=2.0 * omega,
                                 points=self.breakpoints(), epsabs=1e-15 * scale,
                                 epsrel=epsrel)
        return near + far

    def pv_kernel(self, omega):
        return self.pv_kernel_numeric(omega)

    # -- Laplace transform ----------------------------------------------------
    def laplace_numeric(self, s):
        s = complex(s)
        if s.real < 0:
            raise DomainError("Re(s) must be >= 0")
        if s.real == 0.0:
            y = s.imag
            if y == 0.0:
                return complex(self.reorganization())
            # boundary value from the right half plane
            return complex(self.pv_kernel(abs(y)), -math.copysign(math.pi, y) * float(self(abs(y))))
        s2 = s * s

        def re(w):
            return (2.0 * w * float(self(w)) / (s2 + w * w)).real

        def im(w):
            return (2.0 * w * float(self(w)) / (s2 + w * w)).imag

        pts = tuple(self.breakpoints()) + (abs(s.imag),)
        return complex(integrate_halfline(re, points=pts), integrate_halfline(im, points=pts))

    def laplace(self, s):
        return self.laplace_numeric(s)


@dataclass(frozen=True)
class Lorentzian(SpectralDensity):
    """J(w) = (1/pi) lam^2 gamma w / ((omega0^2 - w^2)^2 + gamma^2 w^2).

    `lam` is the coupling, `omega0` the resonance and `gamma` the peak width.
    The kernel transform is rational, K^(s) = lam^2 / (s^2 + gamma s + omega0^2),
    which is what makes the g-functions and the Markovian embedding exact.
    """

    lam: float
    omega0: float
    gamma: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise DomainError("lam must be >= 0")
        if not (self.omega0 > 0 and self.gamma > 0):
            raise DomainError("omega0 and gamma must be > 0")

    @property
    def is_zero(self):
        return self.lam == 0.0

    def _den(self, w):
        return (self.omega0**2 - w * w) ** 2 + (self.gamma * w) ** 2

    def __call__(self, omega):
        w = _check_nonnegative(omega)
        return _scalar_or_array(self.lam**2 * self.gamma * w / (math.pi * self._den(w)))

    def j_over_omega(self, omega):
        w = _check_nonnegative(omega)
        return _scalar_or_array(self.lam**2 * self.gamma / (math.pi * self._den(w)))

    def breakpoints(self):
        return (self.omega0,)

    def feature_width(self):
        return self.gamma

    def reorganization(self):
        return self.lam**2 / self.omega0**2

    def kernel_time(self, tau):
        tau = np.asarray(tau, dtype=float)
        lam2, g, w0 = self.lam**2, self.gamma, self.omega0
        t = np.where(tau > 0, tau, 0.0)
        disc = w0 * w0 - 0.25 * g * g
        if disc > 0:
            w1 = math.sqrt(disc)
            out = lam2 * np.exp(-0.5 * g * t) * np.sin(w1 * t) / w1
        elif disc < 0:
            k = math.sqrt(-disc)
            out = lam2 * (np.exp((k - 0.5 * g) * t) - np.exp(-(k + 0.5 * g) * t)) / (2 * k)
        else:
            out = lam2 * t * np.exp(-0.5 * g * t)
        return _scalar_or_array(np.where(tau > 0, out, 0.0))

    def laplace(self, s):
        s = np.asarray(s, dtype=complex)
        if np.any(s.real < 0):
            raise DomainError("Re(s) must be >= 0")
        den = s * s + self.gamma * s + self.omega0**2
        if np.any(np.abs(den) <= 1e-14 * self.omega0**2):
            raise SingularityError("s coincides with a kernel pole")
        out = self.lam**2 / den
        return complex(out) if out.ndim == 0 else out

    def pv_kernel(self, omega):
        w = _check_nonnegative(omega)
        d = self.omega0**2 - w * w
        return _scalar_or_array(self.lam**2 * d / (d * d + (self.gamma * w) ** 2))


@dataclass(frozen=True)
class OhmicExpCutoff(SpectralDensity):
    """J(w) = (gamma_damp / pi) w exp(-w / omega_cutoff)."""

    gamma_damp: float
    omega_cutoff: float

    def __post_init__(self):
        if not (self.gamma_damp > 0 and self.omega_cutoff > 0):
            raise DomainError("gamma_damp and omega_cutoff must be > 0")

    def __call__(self, omega):
        w = _check_nonnegative(omega)
        return _scalar_or_array(self.gamma_damp / math.pi * w * np.exp(-w / self.omega_cutoff))

    def j_over_omega(self, omega):
        w = _check_nonnegative(omega)
        return _scalar_or_array(self.gamma_damp / math.pi * np.exp(-w / self.omega_cutoff))

    def breakpoints(self):
        return (self.omega_cutoff,)

    def feature_width(self):
        return self.omega_cutoff

    def reorganization(self):
        return 2.0 * self.gamma_damp * self.omega_cutoff / math.pi


@dataclass(frozen=True, eq=False)
class Tabulated(SpectralDensity):
    """Piecewise-linear J through (grid, values); zero outside the grid."""

    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise DomainError("grid and values must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(grid) <= 0) or grid[0] < 0:
            raise DomainError("grid must be strictly increasing and nonnegative")
        if np.any(values < 0):
            raise DomainError("values must be nonnegative")
        if grid[0] == 0.0 and values[0] != 0.0:
            raise DomainError("J(0) must vanish")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def is_zero(self):
        return not np.any(self.values)

    def __call__(self, omega):
        w = _check_nonnegative(omega)
        return _scalar_or_array(np.interp(w, self.grid, self.values, left=0.0, right=0.0))

    def j_over_omega(self, omega):
        w = _check_nonnegative(omega)
        if self.grid[0] == 0.0:
            slope0 = self.values[1] / self.grid[1]
        else:
            slope0 = 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(w > 0, np.interp(w, self.grid, self.values, left=0.0, right=0.0) / w, slope0)
        return _scalar_or_array(out)

    def breakpoints(self):
        g = self.grid
        if g.size > 50:
            # peak of the table is enough to guide subdivision
            return (float(g[np.argmax(self.values)]),)
        return tuple(float(x) for x in g[1:-1])

    def feature_width(self):
        return float(np.min(np.diff(self.grid)))

    def _segments(self):
        g, v = self.grid, self.values
        slope = np.diff(v) / np.diff(g)
        return g[:-1], g[1:], v[:-1] - slope * g[:-1], slope

    def reorganization(self):
        # exact integral of the linear interpolant divided by w
        a, b, c0, c1 = self._segments()
        with np.errstate(divide="ignore", invalid="ignore"):
            log_term = np.where(a > 0, c0 * np.log(np.where(a > 0, b / a, 1.0)), 0.0)
        return float(2.0 * np.sum(log_term + c1 * (b - a)))

    def kernel_time(self, tau):
        tau = float(tau)
        if tau <= 0.0 or self.is_zero:
            return 0.0
        a, b, c0, c1 = self._segments()

        def antideriv(w):
            return -(c0 + c1 * w) * np.cos(w * tau) / tau + c1 * np.sin(w * tau) / tau**2

        if tau * self.grid[-1] < 1e-3:
            # series form avoids cancellation: sin(w t) ~ w t - (w t)^3 / 6
            def m(k):
                return np.sum(c0 * (b ** (k + 1) - a ** (k + 1)) / (k + 1)
                              + c1 * (b ** (k + 2) - a ** (k + 2)) / (k + 2))
            return float(2.0 * (tau * m(1) - tau**3 / 6.0 * m(3)))
        return float(2.0 * np.sum(antideriv(b) - antideriv(a)))


# ---------------------------------------------------------------------------
# bath and oscillator


class NoiseKind(enum.Enum):
    QUANTUM = "quantum"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class BathSpec:
    """Spectral density plus temperature and the noise statistics to use."""

    j: SpectralDensity
    temperature: float
    kind: NoiseKind = NoiseKind.QUANTUM

    def __post_init__(self):
        if not self.temperature >= 0:
            raise DomainError("temperature must be >= 0")
        if not isinstance(self.kind, NoiseKind):
            object.__setattr__(self, "kind", NoiseKind(self.kind))

    def with_temperature(self, temperature):
        return BathSpec(self.j, temperature, self.kind)

    def with_kind(self, kind):
        return BathSpec(self.j, self.temperature, NoiseKind(kind))

    def describe(self):
        return f"{self.kind.value} T={self.temperature:g} {self.j!r}"


@dataclass(frozen=True)
class OscillatorParams:
    mass: float = 1.0
    omega: float = 1.0
    counter_term: bool = True

    def __post_init__(self):
        if not (self.mass > 0 and self.omega > 0):
            raise DomainError("mass and omega must be > 0")


# ---------------------------------------------------------------------------
# public functional interface


def eval_spectral_density(j: SpectralDensity, omega):
    """J(omega); negative frequencies raise :class:`DomainError`."""
    return j(omega)


def eval_memory_kernel_time(j: SpectralDensity, tau):
    """K(tau); zero for tau <= 0."""
    if np.ndim(tau) == 0:
        return float(j.kernel_time(tau))
    if isinstance(j, Lorentzian):
        return j.kernel_time(tau)
    return np.vectorize(j.kernel_time, otypes=[float])(tau)


def eval_kernel_laplace(j: SpectralDensity, s):
    """Laplace transform of K at Re(s) >= 0 (imaginary axis as a boundary value)."""
    return j.laplace(s)


def eval_kernel_fourier(j: SpectralDensity, omega):
    """Fourier transform int K(t) e^{i omega t} dt = K^(-i omega).

    Its imaginary part is +pi J(omega) for omega > 0.
    """
    if isinstance(j, Lorentzian):
        return j.laplace(-1j * np.asarray(omega, dtype=float) + 0.0)
    w = float(omega)
    return complex(j.pv_kernel(abs(w)), math.copysign(math.pi, w) * float(j(abs(w))))


def renormalized_frequency_sq(p: OscillatorParams, j: SpectralDensity):
    """Squared frequency entering the Langevin equation.

    With the counter-term this is omega^2 + K^(0)/m; without it the bare omega^2.
    """
    if not p.counter_term:
        return p.omega**2
    return p.omega**2 + j.reorganization() / p.mass


def _x_coth_x(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-6
    xs = np.where(small, 1.0, x)
    return np.where(small, 1.0 + x * x / 3.0, xs / np.tanh(xs))


def eval_noise_spectrum(kind: NoiseKind, omega, temperature):
    """N(omega, T): omega coth(omega / 2T) (quantum) or 2T (classical)."""
    kind = NoiseKind(kind)
    w = _check_nonnegative(omega)
    if temperature < 0:
        raise DomainError("temperature must be >= 0")
    if kind is NoiseKind.CLASSICAL:
        return _scalar_or_array(np.full_like(w, 2.0 * temperature))
    if temperature == 0:
        return _scalar_or_array(w.copy())
    return _scalar_or_array(2.0 * temperature * _x_coth_x(w / (2.0 * temperature)))


def eval_force_psd(b: BathSpec, omega):
    """P_F(omega) = pi J(omega)/omega N(omega, T).

    This is the two-sided density of the force autocorrelation in the
    convention var(F) = (1/pi) int_0^inf P_F dw.
    """
    w = _check_nonnegative(omega)
    return _scalar_or_array(math.pi * np.asarray(b.j.j_over_omega(w))
                            * np.asarray(eval_noise_spectrum(b.kind, w, b.temperature)))


def force_autocorrelation(b: BathSpec, tau):
    """<F(t) F(t - tau)> = int_0^inf J/w N cos(w tau) dw, by quadrature."""
    tau = abs(float(tau))
    if b.j.is_zero:
        return 0.0

    def f(w):
        return float(b.j.j_over_omega(w)) * float(eval_noise_spectrum(b.kind, w, b.temperature))

    if tau == 0.0:
        return integrate_halfline(f, points=b.j.breakpoints(), epsrel=1e-12)
    # resolved features on a finite interval, smooth tail by the Fourier rule
    pts = [w for w in b.j.breakpoints() if w > 0]
    cut = 20.0 * max(pts) if pts else 20.0
    scale = integrate_halfline(f, points=b.j.breakpoints(), epsrel=1e-8)
    head, _ = _quad(f, 0.0, cut, weight="cos", wvar=tau, epsabs=1e-13 * scale, limit=2000)
    tail, _ = _quad(f, cut, np.inf, weight="cos", wvar=tau, epsabs=1e-13 * scale, limlst=200)
    return head + tail
