"""Classical-noise oracle independent of the package.

A Lorentzian bath is equivalent to one auxiliary mode y per attachment,

    y'' = -omega0^2 y - gamma y' + lam x + xi,   <xi xi> = 2 gamma T delta,

which feeds the force lam y - (lam^2/omega0^2) x back onto the coupled
coordinate (the counter-term restores the bare potential).  For classical
noise the joint Gaussian state obeys dC/dt = A C + C A^T + Q, solved here
with scipy's ODE and Lyapunov solvers.  The mode starts in its own
stationary state, independent of the oscillator, so that its thermal force
is stationary from t = 0.
"""

import numpy as np
from scipy import integrate, linalg


def network_drift(mass, potential, attachments, counter_term=True):
    """Drift and diffusion for state (x, p, y, w), w = y'.

    ``attachments`` is a list of (coord, lam, omega0, gamma, T), one mode each.
    """
    mass = np.atleast_2d(np.asarray(mass, float))
    v = np.atleast_2d(np.asarray(potential, float)).copy()
    n, k = mass.shape[0], len(attachments)
    dim = 2 * n + 2 * k
    a = np.zeros((dim, dim))
    q = np.zeros((dim, dim))
    minv = np.linalg.inv(mass)
    a[:n, n:2 * n] = minv
    for i, (c, lam, w0, g, temp) in enumerate(attachments):
        if counter_term:
            v[c, c] += lam**2 / w0**2
    a[n:2 * n, :n] = -v
    for i, (c, lam, w0, g, temp) in enumerate(attachments):
        yi, wi = 2 * n + 2 * i, 2 * n + 2 * i + 1
        a[n + c, yi] += lam
        a[yi, wi] = 1.0
        a[wi, yi] = -w0**2
        a[wi, wi] = -g
        a[wi, c] = lam
        q[wi, wi] = 2 * g * temp
    return a, q


def initial_covariance(n, sigma0, attachments):
    """Oscillator block ``sigma0`` (2n x 2n) plus stationary free modes."""
    k = len(attachments)
    c = np.zeros((2 * n + 2 * k,) * 2)
    c[:2 * n, :2 * n] = sigma0
    for i, (_, _, w0, _, temp) in enumerate(attachments):
        c[2 * n + 2 * i, 2 * n + 2 * i] = temp / w0**2
        c[2 * n + 2 * i + 1, 2 * n + 2 * i + 1] = temp
    return c


def evolve(a, q, c0, t_eval):
    dim = a.shape[0]

    def rhs(_, y):
        c = y.reshape(dim, dim)
        return (a @ c + c @ a.T + q).ravel()

    sol = integrate.solve_ivp(rhs, (0, float(t_eval[-1])), c0.ravel(), t_eval=t_eval,
                              method="DOP853", rtol=1e-11, atol=1e-13)
    return sol.y.T.reshape(len(t_eval), dim, dim)


def steady(a, q):
    return linalg.solve_continuous_lyapunov(a, -q)


def single(mass, omega, lam, w0, g, temp, counter_term=True):
    return network_drift([[mass]], [[mass * omega**2]], [(0, lam, w0, g, temp)], counter_term)


def heat_currents(a, c, attachments, n, mass_diag):
    """Mean power lam <y p>/m delivered by each mode to its coordinate."""
    out = []
    for i, (coord, lam, w0, g, temp) in enumerate(attachments):
        out.append(lam * c[2 * n + 2 * i, n + coord] / mass_diag[coord])
    return np.array(out)
