import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import linalg

import lyapunov
from qlangevin.exceptions import DegeneratePolesError, DomainError, UnstableError
from qlangevin.oracle import (
    classical_thermal_covariances,
    covariance_evolution,
    g_functions,
    gibbs_covariances,
    mean_evolution,
    mean_force_covariances,
    steady_covariances_matsubara,
    steady_covariances_quadrature,
    write_dynamics_csv,
    write_steady_csv,
)
from qlangevin.spectral import BathSpec, Lorentzian, NoiseKind, OhmicExpCutoff, OscillatorParams

# Steady covariances from mpmath quadrature at 30 digits, (lam, T) -> (sigma_xx, sigma_pp);
# omega0 = 0.5, gamma = 0.1, m = Omega = 1, counter-term on.
MPMATH_STEADY = {
    (0.3, 0.1): (0.465469298694573268, 0.576599483770477625),
    (0.3, 1.0): (1.081506321903092953, 1.110730015445970663),
    (2.0, 0.1): (0.223213134069804916, 2.049664284958233680),
    (2.0, 1.0): (1.066500691195683825, 2.126611154551274675),
}

# Exact dynamics of a discretized bath (6000 modes up to w = 30, linear
# Heisenberg equations diagonalized exactly, modes thermal at T = 0.1,
# oscillator in its ground state); converged to ~1e-7 in the mode count.
BRUTE_FORCE_QUANTUM = {
    2.0: (0.54379791080349, 0.10944331774243524, 0.5629359798446233),
    5.0: (0.567764257972917, 0.08908824271184039, 0.48723780715847),
    20.0: (0.41083532699140024, 0.0801499793670564, 0.6835459286174377),
}

stable_params = st.tuples(
    st.floats(0.3, 3.0),   # mass
    st.floats(0.3, 3.0),   # omega
    st.floats(0.01, 2.5),  # lam
    st.floats(0.2, 2.0),   # omega0
    st.floats(0.05, 1.5),  # gamma
)


def test_pole_residue_identities(osc, weak):
    g = g_functions(osc, weak)
    assert abs(np.sum(g.residues_g2)) <= 1e-12
    assert abs(np.sum(g.residues_g2 * g.poles) - 1 / osc.mass) <= 1e-12
    assert np.all(g.poles.real < 0)


def test_g_function_initial_values(osc, weak):
    g = g_functions(osc, weak)
    assert g.g1(0.0) == pytest.approx(1.0, abs=1e-12)
    assert g.g2(0.0) == pytest.approx(0.0, abs=1e-12)
    assert g.g3(0.0) == pytest.approx(0.0, abs=1e-12)


def test_mean_evolution_matches_matrix_exponential(osc, weak):
    a, _ = lyapunov.single(1.0, 1.0, 0.3, 0.5, 0.1, 0.0)
    g = g_functions(osc, weak)
    t = np.array([0.5, 3.0, 17.0])
    mx, mp = mean_evolution(g, (0.7, -0.2), t)
    for k, tk in enumerate(t):
        z = linalg.expm(a * tk) @ np.array([0.7, -0.2, 0.0, 0.0])
        assert mx[k] == pytest.approx(z[0], abs=1e-11)
        assert mp[k] == pytest.approx(z[1], abs=1e-11)


def test_laplace_of_g2_is_rational_response(osc, weak):
    g = g_functions(osc, weak)
    s = 0.3 + 0.8j
    expected = 1 / (osc.mass * (s * s + 1.36) - weak.laplace(s))
    assert g.laplace_g2(s) == pytest.approx(expected, rel=1e-12)


def test_g_functions_reject_other_densities(osc):
    with pytest.raises(TypeError):
        g_functions(osc, OhmicExpCutoff(0.1, 1.0))


@pytest.mark.parametrize("j", [
    Lorentzian(0.0, 1.0, 1e-12),  # kernel poles sit on the oscillator poles
    Lorentzian(0.0, 0.5, 1.0),    # critically damped kernel: exact double root
])
def test_degenerate_poles_detected(j):
    with pytest.raises(DegeneratePolesError):
        g_functions(OscillatorParams(), j)


def test_close_but_distinct_poles_accepted():
    # poles -gamma/2 +- i sqrt(1 - gamma^2/4) and +-i are 5e-7 apart
    g = g_functions(OscillatorParams(), Lorentzian(0.0, 1.0, 1e-6))
    assert np.min(np.abs(g.poles.real)) < 1e-9
    assert abs(np.sum(g.residues_g2 * g.poles) - 1) < 1e-6


def test_narrow_resonance_quadrature():
    # quality factor ~3e4 pole at w ~ 8.07; classical answer is exactly thermal
    p = OscillatorParams()
    j = Lorentzian(2.0, 0.25, 0.25)
    q = steady_covariances_quadrature(p, BathSpec(j, 1.0, NoiseKind.CLASSICAL))
    assert (q.sigma_xx, q.sigma_pp) == pytest.approx((1.0, 1.0), rel=1e-9)
    qq = steady_covariances_quadrature(p, BathSpec(j, 1.0))
    mm = steady_covariances_matsubara(p, j, 1.0)
    assert (qq.sigma_xx, qq.sigma_pp) == pytest.approx((mm.sigma_xx, mm.sigma_pp), rel=1e-9)


def test_quantum_dynamics_vs_discretized_bath(osc, quantum_bath):
    g = g_functions(osc, quantum_bath.j)
    t = np.array(sorted(BRUTE_FORCE_QUANTUM))
    st_ = covariance_evolution(g, quantum_bath, (0.5, 0.0, 0.5), t)
    for k, tk in enumerate(t):
        ref = BRUTE_FORCE_QUANTUM[tk]
        got = (st_.sigma_xx[k], st_.sigma_xp[k], st_.sigma_pp[k])
        assert np.allclose(got, ref, rtol=0, atol=1e-6)


@pytest.mark.parametrize("counter_term", [True, False])
def test_classical_dynamics_vs_lyapunov(weak, counter_term):
    p = OscillatorParams(counter_term=counter_term)
    b = BathSpec(weak, 0.4, NoiseKind.CLASSICAL)
    t = np.array([0.0, 1.0, 7.0, 40.0])
    sig0 = np.array([[0.5, 0.1], [0.1, 0.8]])
    a, q = lyapunov.single(1.0, 1.0, 0.3, 0.5, 0.1, 0.4, counter_term)
    att = [(0, 0.3, 0.5, 0.1, 0.4)]
    ref = lyapunov.evolve(a, q, lyapunov.initial_covariance(1, sig0, att), t)
    got = covariance_evolution(g_functions(p, weak), b, (0.5, 0.1, 0.8), t)
    assert np.allclose(got.sigma_xx, ref[:, 0, 0], atol=1e-8)
    assert np.allclose(got.sigma_xp, ref[:, 0, 1], atol=1e-8)
    assert np.allclose(got.sigma_pp, ref[:, 1, 1], atol=1e-8)


def test_covariance_evolution_includes_mean(osc, quantum_bath):
    g = g_functions(osc, quantum_bath.j)
    t = np.array([3.0])
    a = covariance_evolution(g, quantum_bath, (0.5, 0, 0.5), t)
    b = covariance_evolution(g, quantum_bath, (0.5, 0, 0.5), t, mu0=(1.0, 0.0))
    # covariances are centred, so initial means do not change them
    assert b.sigma_xx[0] == pytest.approx(a.sigma_xx[0], rel=1e-9)
    mx, _ = mean_evolution(g, (1.0, 0.0), t)
    assert b.mu_x[0] == pytest.approx(mx[0], rel=1e-12)


def test_initial_covariances_are_reproduced(osc, quantum_bath):
    g = g_functions(osc, quantum_bath.j)
    s = covariance_evolution(g, quantum_bath, (0.3, -0.05, 0.9), [0.0])
    assert (s.sigma_xx[0], s.sigma_xp[0], s.sigma_pp[0]) == pytest.approx((0.3, -0.05, 0.9), abs=1e-14)


@pytest.mark.parametrize("key", sorted(MPMATH_STEADY))
def test_steady_routes_vs_high_precision(osc, key):
    lam, temp = key
    j = Lorentzian(lam, 0.5, 0.1)
    ref = MPMATH_STEADY[key]
    q = steady_covariances_quadrature(osc, BathSpec(j, temp))
    m = steady_covariances_matsubara(osc, j, temp)
    f = mean_force_covariances(osc, j, temp, pv="closed")
    for r in (q, m, f):
        assert r.sigma_xx == pytest.approx(ref[0], rel=1e-9)
        assert r.sigma_pp == pytest.approx(ref[1], rel=1e-9)


def test_mean_force_numeric_principal_value(osc, weak):
    r = mean_force_covariances(osc, weak, 1.0, pv="numeric")
    ref = MPMATH_STEADY[(0.3, 1.0)]
    assert (r.sigma_xx, r.sigma_pp) == pytest.approx(ref, rel=1e-6)


def test_long_time_limit_of_dynamics_is_steady_state(osc):
    j = Lorentzian(0.3, 0.5, 0.8)
    b = BathSpec(j, 1.0)
    g = g_functions(osc, j)
    late = covariance_evolution(g, b, (0.5, 0, 0.5), [60.0 / g.slowest_rate])
    ss = steady_covariances_quadrature(osc, b)
    assert late.sigma_xx[0] == pytest.approx(ss.sigma_xx, rel=1e-7)
    assert late.sigma_pp[0] == pytest.approx(ss.sigma_pp, rel=1e-7)


def test_gibbs_vs_number_state_sum(osc):
    for temp in (0.2, 1.0, 5.0):
        n = np.arange(4000)
        w = np.exp(-n / temp - np.max(-n / temp))
        energy = np.sum(w * (n + 0.5)) / np.sum(w)
        gb = gibbs_covariances(osc, temp)
        # <x^2> = <p^2> = <n + 1/2> for m = Omega = 1
        assert gb.sigma_xx == pytest.approx(energy, rel=1e-12)
        assert gb.sigma_pp == pytest.approx(energy, rel=1e-12)
    assert gibbs_covariances(osc, 0.0).sigma_xx == 0.5


def test_weak_coupling_approaches_gibbs(osc):
    j = Lorentzian(0.01, 0.5, 0.1)
    for temp in (0.3, 3.0):
        q = steady_covariances_quadrature(osc, BathSpec(j, temp))
        gb = gibbs_covariances(osc, temp)
        assert q.sigma_xx == pytest.approx(gb.sigma_xx, rel=1e-3)
        assert q.sigma_pp == pytest.approx(gb.sigma_pp, rel=1e-3)


@pytest.mark.parametrize("counter_term", [True, False])
def test_classical_steady_vs_lyapunov(weak, counter_term):
    p = OscillatorParams(counter_term=counter_term)
    a, q = lyapunov.single(1.0, 1.0, 0.3, 0.5, 0.1, 0.7, counter_term)
    ref = lyapunov.steady(a, q)
    got = steady_covariances_quadrature(p, BathSpec(weak, 0.7, NoiseKind.CLASSICAL))
    exact = classical_thermal_covariances(p, weak, 0.7)
    assert got.sigma_xx == pytest.approx(ref[0, 0], rel=1e-9)
    assert got.sigma_pp == pytest.approx(ref[1, 1], rel=1e-9)
    assert exact.sigma_xx == pytest.approx(ref[0, 0], rel=1e-12)


def test_zero_temperature(osc, weak):
    with pytest.raises(DomainError):
        steady_covariances_matsubara(osc, weak, 0.0)
    q = steady_covariances_quadrature(osc, BathSpec(weak, 0.0))
    f = mean_force_covariances(osc, weak, 0.0, pv="closed")
    assert q.sigma_xx == pytest.approx(f.sigma_xx, rel=1e-6)
    assert q.uncertainty >= 0.25


def test_unstable_without_counter_term():
    j = Lorentzian(1.2, 0.5, 0.1)  # lam^2/omega0^2 > m Omega^2
    with pytest.raises(UnstableError):
        steady_covariances_quadrature(OscillatorParams(counter_term=False), BathSpec(j, 1.0))


def test_csv_writers(tmp_path, osc, quantum_bath):
    g = g_functions(osc, quantum_bath.j)
    s = covariance_evolution(g, quantum_bath, (0.5, 0, 0.5), [0.0, 1.0])
    write_dynamics_csv(tmp_path / "d.csv", s, header=["x"])
    lines = (tmp_path / "d.csv").read_text().splitlines()
    assert lines[1] == "t,sigma_xx,sigma_xp,sigma_pp" and len(lines) == 4
    write_steady_csv(tmp_path / "s.csv", [0.1], [gibbs_covariances(osc, 0.1)])
    assert (tmp_path / "s.csv").read_text().splitlines()[1].endswith(",gibbs")


@settings(max_examples=60, deadline=None)
@given(stable_params)
def test_property_poles_stable_and_identities(params):
    m, w, lam, w0, g = params
    p = OscillatorParams(m, w)
    gf = g_functions(p, Lorentzian(lam, w0, g))
    assert np.all(gf.poles.real < 0)
    scale = max(1.0, float(np.max(np.abs(gf.poles))))
    assert abs(np.sum(gf.residues_g2)) <= 1e-10 * scale
    assert abs(np.sum(gf.residues_g2 * gf.poles) - 1 / m) <= 1e-10 * scale / m


@settings(max_examples=15, deadline=None)
@given(params=stable_params, temp=st.floats(0.05, 5.0))
def test_property_quantum_steady_state_obeys_uncertainty(params, temp):
    m, w, lam, w0, g = params
    p = OscillatorParams(m, w)
    j = Lorentzian(lam, w0, g)
    ss = steady_covariances_matsubara(p, j, temp)
    assert ss.sigma_xx > 0 and ss.sigma_pp > 0
    assert ss.uncertainty >= 0.25 * (1 - 1e-9)


@settings(max_examples=15, deadline=None)
@given(params=stable_params, temp=st.floats(0.01, 5.0))
def test_property_classical_steady_state_is_thermal(params, temp):
    m, w, lam, w0, g = params
    p = OscillatorParams(m, w)
    j = Lorentzian(lam, w0, g)
    q = steady_covariances_quadrature(p, BathSpec(j, temp, NoiseKind.CLASSICAL))
    assert q.sigma_xx == pytest.approx(temp / (m * w * w), rel=1e-7)
    assert q.sigma_pp == pytest.approx(m * temp, rel=1e-7)
