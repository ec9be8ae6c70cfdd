import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from qlangevin.exceptions import DomainError, SingularityError
from qlangevin.spectral import (
    BathSpec,
    Lorentzian,
    NoiseKind,
    OhmicExpCutoff,
    OscillatorParams,
    Tabulated,
    eval_force_psd,
    eval_kernel_fourier,
    eval_kernel_laplace,
    eval_memory_kernel_time,
    eval_noise_spectrum,
    eval_spectral_density,
    force_autocorrelation,
    renormalized_frequency_sq,
)

# mpmath at 30 digits of 2 int J(w) sin(w) dw for lam=0.3, omega0=0.5, gamma=0.1
K_AT_ONE = 0.0821226538833884866909249764524
# mpmath at 30 digits of x coth(x) at x = 0.005
XCOTHX_SMALL = 1.00000833331944447751

lorentzians = st.builds(
    Lorentzian,
    lam=st.floats(0.05, 3.0),
    omega0=st.floats(0.2, 3.0),
    gamma=st.floats(0.05, 2.0),
)


def quad_kernel(j, tau):
    """Independent route: scipy QAWF on the defining sine integral."""
    val, _ = integrate.quad(lambda w: float(j(w)), 0, np.inf, weight="sin", wvar=tau)
    return 2 * val


def test_spectral_density_values(weak):
    w = 0.7
    expected = 0.09 * 0.1 * w / (math.pi * ((0.25 - w * w) ** 2 + 0.01 * w * w))
    assert eval_spectral_density(weak, w) == pytest.approx(expected, rel=1e-15)
    assert eval_spectral_density(weak, 0.0) == 0.0


def test_negative_frequency_rejected(weak):
    with pytest.raises(DomainError):
        eval_spectral_density(weak, -0.1)


def test_kernel_matches_frozen_high_precision_value(weak):
    assert eval_memory_kernel_time(weak, 1.0) == pytest.approx(K_AT_ONE, rel=1e-13)


def test_kernel_is_zero_for_nonpositive_times(weak):
    assert eval_memory_kernel_time(weak, 0.0) == 0.0
    assert eval_memory_kernel_time(weak, -2.0) == 0.0


def test_reorganization_closed_vs_numeric(weak):
    assert weak.reorganization() == pytest.approx(0.36, rel=1e-15)
    assert weak.reorganization_numeric() == pytest.approx(0.36, rel=1e-9)


@pytest.mark.parametrize("gamma", [0.1, 1.0, 2.0])  # underdamped, critical, overdamped
@pytest.mark.parametrize("tau", [0.3, 2.0, 7.5])
def test_kernel_closed_form_vs_defining_integral(gamma, tau):
    j = Lorentzian(0.8, 0.5 if gamma != 1.0 else 0.5, gamma)
    assert j.kernel_time(tau) == pytest.approx(quad_kernel(j, tau), rel=1e-6, abs=1e-10)


def test_laplace_at_origin_is_reorganization(weak):
    assert eval_kernel_laplace(weak, 0.0).real == pytest.approx(weak.reorganization(), rel=1e-14)


def test_laplace_matches_time_domain_transform(weak):
    s = 0.4 + 0.3j
    re, _ = integrate.quad(lambda t: weak.kernel_time(t) * math.exp(-s.real * t) * math.cos(s.imag * t),
                           0, 400, limit=2000)
    im, _ = integrate.quad(lambda t: -weak.kernel_time(t) * math.exp(-s.real * t) * math.sin(s.imag * t),
                           0, 400, limit=2000)
    assert eval_kernel_laplace(weak, s) == pytest.approx(complex(re, im), rel=1e-8)


def test_laplace_left_half_plane_rejected(weak):
    with pytest.raises(DomainError):
        eval_kernel_laplace(weak, -0.1)


def test_laplace_pole_on_axis_is_singular():
    # with a vanishing width the kernel poles sit on the imaginary axis at +-i omega0
    with pytest.raises(SingularityError):
        Lorentzian(1.0, 0.5, 1e-30).laplace(0.5j)


def test_fourier_sign_convention(weak):
    for w in (0.2, 0.5, 1.3):
        f = eval_kernel_fourier(weak, w)
        assert f.imag == pytest.approx(math.pi * weak(w), rel=1e-12)
        # the Laplace transform on the imaginary axis carries the opposite sign
        assert eval_kernel_laplace(weak, 1j * w).imag == pytest.approx(-math.pi * weak(w), rel=1e-12)


@pytest.mark.parametrize("w", [0.1, 0.45, 0.5, 0.55, 2.0])
def test_principal_value_closed_vs_numeric(weak, w):
    assert weak.pv_kernel_numeric(w) == pytest.approx(weak.pv_kernel(w), rel=1e-8, abs=1e-12)


def test_ohmic_closed_forms():
    j = OhmicExpCutoff(0.2, 1.5)
    assert j.reorganization() == pytest.approx(j.reorganization_numeric(), rel=1e-10)
    # K(tau) = (2 gamma/pi) wc^2 * 2 (wc tau) / (1 + (wc tau)^2)^2 by direct integration
    tau, g, wc = 0.8, 0.2, 1.5
    expected = 2 * g / math.pi * 2 * wc**3 * tau / (1 + (wc * tau) ** 2) ** 2
    assert eval_memory_kernel_time(j, tau) == pytest.approx(expected, rel=1e-8)


def test_tabulated_matches_interpolated_integrals():
    grid = np.linspace(0.0, 3.0, 31)
    values = np.sin(grid) ** 2 * np.exp(-grid)
    j = Tabulated(grid, values)
    ref, _ = integrate.quad(lambda w: float(j(w)) / w if w > 0 else 0.0, 0, 3, points=grid[1:-1], limit=400)
    assert j.reorganization() == pytest.approx(2 * ref, rel=1e-10)
    for tau in (1e-5, 0.7, 4.0):
        ref, _ = integrate.quad(lambda w: float(j(w)) * math.sin(w * tau), 0, 3, points=grid[1:-1], limit=400)
        assert j.kernel_time(tau) == pytest.approx(2 * ref, rel=1e-8, abs=1e-16)


def test_tabulated_validation():
    with pytest.raises(DomainError):
        Tabulated([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(DomainError):
        Tabulated([1.0, 0.5], [0.0, 0.0])
    with pytest.raises(DomainError):
        Tabulated([0.0, 1.0], [0.0, -1.0])


def test_noise_spectrum_limits():
    assert eval_noise_spectrum(NoiseKind.QUANTUM, 0.01, 1.0) == pytest.approx(2 * XCOTHX_SMALL, rel=1e-14)
    assert eval_noise_spectrum(NoiseKind.QUANTUM, 0.0, 1.0) == pytest.approx(2.0)
    assert eval_noise_spectrum(NoiseKind.QUANTUM, 3.0, 0.0) == 3.0
    assert eval_noise_spectrum(NoiseKind.CLASSICAL, 3.0, 0.7) == pytest.approx(1.4)


def test_noise_spectrum_high_temperature_is_classical():
    w = np.linspace(0.01, 1, 20)
    q = eval_noise_spectrum(NoiseKind.QUANTUM, w, 1e4)
    assert np.allclose(q, 2e4, rtol=1e-8)


def test_force_psd_definition(weak):
    b = BathSpec(weak, 0.3)
    w = 0.8
    assert eval_force_psd(b, w) == pytest.approx(math.pi * weak(w) / w * w / math.tanh(w / 0.6), rel=1e-14)


def test_classical_force_variance(weak):
    # classical noise: <F^2> = T K^(0)
    b = BathSpec(weak, 0.4, NoiseKind.CLASSICAL)
    assert force_autocorrelation(b, 0.0) == pytest.approx(0.4 * 0.36, rel=1e-9)


def test_classical_autocorrelation_is_t_times_kernel_cosine_transform(weak):
    # for classical noise <F F>(tau) = T K_c(tau) with K_c(tau) = lam^2 e^{-g tau/2}(cos w1 tau + g/(2 w1) sin w1 tau)/w0^2
    T, tau = 0.4, 3.0
    w1 = math.sqrt(0.25 - 0.0025)
    kc = 0.09 / 0.25 * math.exp(-0.05 * tau) * (math.cos(w1 * tau) + 0.05 / w1 * math.sin(w1 * tau))
    b = BathSpec(weak, T, NoiseKind.CLASSICAL)
    assert force_autocorrelation(b, tau) == pytest.approx(T * kc, rel=1e-7)


def test_renormalized_frequency(weak):
    assert renormalized_frequency_sq(OscillatorParams(), weak) == pytest.approx(1.36)
    assert renormalized_frequency_sq(OscillatorParams(counter_term=False), weak) == 1.0
    assert renormalized_frequency_sq(OscillatorParams(mass=2.0), weak) == pytest.approx(1.18)


def test_parameter_validation():
    with pytest.raises(DomainError):
        Lorentzian(-1.0, 0.5, 0.1)
    with pytest.raises(DomainError):
        Lorentzian(0.3, 0.0, 0.1)
    with pytest.raises(DomainError):
        OscillatorParams(mass=0.0)
    with pytest.raises(DomainError):
        BathSpec(Lorentzian(0.3, 0.5, 0.1), -1.0)


@settings(max_examples=40, deadline=None)
@given(j=lorentzians, w=st.floats(0.0, 20.0))
def test_property_density_nonnegative_and_laplace_consistent(j, w):
    assert j(w) >= 0
    assert eval_kernel_fourier(j, w).imag == pytest.approx(math.pi * j(w), rel=1e-10, abs=1e-300)


@settings(max_examples=25, deadline=None)
@given(j=lorentzians)
def test_property_reorganization_closed_vs_numeric(j):
    assert j.reorganization_numeric() == pytest.approx(j.reorganization(), rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(j=lorentzians, tau=st.floats(0.05, 10.0))
def test_property_kernel_small_time_slope(j, tau):
    # K(tau) ~ lam^2 tau for small tau and |K| <= lam^2 tau everywhere
    assert abs(j.kernel_time(tau)) <= j.lam**2 * tau * (1 + 1e-12)
